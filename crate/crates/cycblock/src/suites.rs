//! Named oracle suites run by `cycblock oracle`. Each returns one [`Check`]
//! per property.

use std::path::PathBuf;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::arith::vp_big;
use crate::ff::oracle::{all_group_elements, generate_fixture, Fixture, FIXTURE_GROUPS};
use crate::ff::{
    build_torus_element, centralizer_enumerate, centralizer_orders, det_order, gl_order, poly, primary_decompose,
    torus_ratio, FieldCtx, MatrixG,
};
use crate::params::{q_minus_eps, Sign};
use crate::synth::{find_q, Check, DEFAULT_SEARCH_BOUND};

pub const SUITES: [&str; 6] = ["gl-orders", "centralizers", "sl3-7", "gu3-2-torus", "valuations", "all"];

/// Commutants larger than this are not enumerated.
const COMMUTANT_LIMIT: u64 = 1 << 20;

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), pass, detail: detail.into() }
}

pub fn run(suite: &str, seed: u64, fixtures: Option<PathBuf>) -> Option<Vec<Check>> {
    let out = match suite {
        "gl-orders" => gl_orders(),
        "centralizers" => centralizers(seed, fixtures),
        "sl3-7" => sl3_7(seed),
        "gu3-2-torus" => gu3_2_torus(seed),
        "valuations" => valuations(),
        "all" => {
            let mut v = gl_orders();
            v.extend(centralizers(seed, fixtures));
            v.extend(sl3_7(seed));
            v.extend(gu3_2_torus(seed));
            v.extend(valuations());
            v
        }
        _ => return None,
    };
    Some(out)
}

/// Order formula against exhaustive counts.
pub fn gl_orders() -> Vec<Check> {
    let mut out = Vec::new();
    for (n, q, eps) in [(2, 2, Sign::Minus), (3, 2, Sign::Minus), (2, 3, Sign::Plus), (2, 5, Sign::Plus)] {
        let formula = gl_order(n as u32, &BigUint::from(q), eps);
        let name = format!("gl-order n={n} q={q} eps={eps}");
        match all_group_elements(n, q, eps) {
            Ok(all) => {
                let count = BigUint::from(all.len());
                out.push(check(name, count == formula, format!("formula {formula}, enumerated {count}")));
            }
            Err(e) => out.push(check(name, false, e.to_string())),
        }
    }
    out
}

fn fixture_for(name: &str, n: usize, q: u64, eps: Sign, seed: u64, dir: &Option<PathBuf>) -> Result<Fixture, String> {
    match dir {
        Some(d) => Fixture::load(d, name).map_err(|e| e.to_string()),
        None => generate_fixture(name, n, q, eps, seed).map_err(|e| e.to_string()),
    }
}

/// Formula and commutant enumeration agree, and the index is `q − ε`, for
/// every semisimple element of each fixture group.
pub fn centralizers(seed: u64, dir: Option<PathBuf>) -> Vec<Check> {
    let mut out = Vec::new();
    for (name, n, q, eps) in FIXTURE_GROUPS {
        let cname = format!("centralizers {name}");
        let fx = match fixture_for(name, n, q, eps, seed, &dir) {
            Ok(f) => f,
            Err(e) => {
                out.push(check(cname, false, e));
                continue;
            }
        };
        let mats = match fx.matrices() {
            Ok(m) => m,
            Err(e) => {
                out.push(check(cname, false, e.to_string()));
                continue;
            }
        };
        let qe = q_minus_eps(&BigUint::from(q), eps).unwrap();
        let mut failures = Vec::new();
        for (i, t) in mats.iter().enumerate() {
            let formula = centralizer_orders(t, fx.seed);
            let direct = centralizer_enumerate(t, COMMUTANT_LIMIT);
            match (formula, direct) {
                (Ok(f), Ok(d)) => {
                    if f != d || f.index().as_ref() != Some(&qe) {
                        failures.push(format!(
                            "#{i}: formula ({}, {}), enumerated ({}, {})",
                            f.order_in_gtilde, f.order_in_g, d.order_in_gtilde, d.order_in_g
                        ));
                    }
                }
                (f, d) => failures.push(format!("#{i}: {:?} / {:?}", f.err(), d.err())),
            }
        }
        let detail = if failures.is_empty() {
            format!("{} semisimple elements, index {qe} throughout", mats.len())
        } else {
            failures.join("; ")
        };
        out.push(check(cname, failures.is_empty() && !mats.is_empty(), detail));
    }
    out
}

/// `diag(ξ, ξ⁻¹, 1)` in `SL₃(7)` with `|ξ| = 3`.
pub fn sl3_7_element() -> MatrixG {
    let k = Arc::new(FieldCtx::prime(7).unwrap());
    let xi = k.element_of_order(3).unwrap();
    let xinv = k.inv(xi).unwrap();
    MatrixG::diag(k, &[xi, xinv, 1], 7, Sign::Plus)
}

pub fn sl3_7(seed: u64) -> Vec<Check> {
    let t = sl3_7_element();
    let mut out = Vec::new();
    let want = (BigUint::from(216u32), BigUint::from(36u32));
    match centralizer_orders(&t, seed) {
        Ok(c) => out.push(check(
            "sl3-7 formula",
            (c.order_in_gtilde.clone(), c.order_in_g.clone()) == want,
            format!("({}, {})", c.order_in_gtilde, c.order_in_g),
        )),
        Err(e) => out.push(check("sl3-7 formula", false, e.to_string())),
    }
    match centralizer_enumerate(&t, COMMUTANT_LIMIT) {
        Ok(c) => out.push(check(
            "sl3-7 enumeration",
            (c.order_in_gtilde.clone(), c.order_in_g.clone()) == want,
            format!("({}, {})", c.order_in_gtilde, c.order_in_g),
        )),
        Err(e) => out.push(check("sl3-7 enumeration", false, e.to_string())),
    }
    match primary_decompose(&t, seed) {
        Ok(d) => out.push(check(
            "sl3-7 decomposition",
            d.h() == 3 && d.factors.iter().all(|f| f.degree == 1 && f.dim == 1),
            format!("h = {}", d.h()),
        )),
        Err(e) => out.push(check("sl3-7 decomposition", false, e.to_string())),
    }
    out
}

/// The order-9 element of `GU₃(2)`: determinant order, irreducible
/// self-dual minimal polynomial and centralizer.
pub fn gu3_2_torus(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let t = match build_torus_element(3, 2, Sign::Minus, 9) {
        Ok(t) => t,
        Err(e) => return vec![check("gu3-2 torus", false, e.to_string())],
    };
    out.push(check("gu3-2 torus form", t.preserves_form(), "gᴴg = I"));
    let ord = t.order(1000);
    out.push(check("gu3-2 torus order", ord == Some(9), format!("{ord:?}")));
    let d = det_order(&t);
    out.push(check("gu3-2 det order", d == 3, format!("|det| = {d}")));
    match primary_decompose(&t, seed) {
        Ok(dec) => {
            let f = &dec.factors[0];
            let irreducible = poly::is_irreducible(&t.field, &f.poly);
            out.push(check(
                "gu3-2 minimal polynomial",
                dec.h() == 1 && f.degree == 3 && irreducible && f.self_dual == Some(true),
                format!("h = {}, degree = {}, irreducible = {irreducible}, self-dual = {:?}", dec.h(), f.degree, f.self_dual),
            ));
        }
        Err(e) => out.push(check("gu3-2 minimal polynomial", false, e.to_string())),
    }
    let want = (BigUint::from(9u32), BigUint::from(3u32));
    let f = centralizer_orders(&t, seed).map(|c| (c.order_in_gtilde, c.order_in_g));
    let e = centralizer_enumerate(&t, COMMUTANT_LIMIT).map(|c| (c.order_in_gtilde, c.order_in_g));
    out.push(check(
        "gu3-2 centralizer",
        f.as_ref() == Ok(&want) && e.as_ref() == Ok(&want),
        format!("formula {f:?}, enumerated {e:?}"),
    ));
    out
}

/// Valuation of `q − ε` for the chosen `q`, and of the torus ratio.
pub fn valuations() -> Vec<Check> {
    let mut out = Vec::new();
    let cap = BigUint::from(2u32).pow(256);
    for p in [3u64, 5, 7, 13] {
        for a in 1..=3u32 {
            for eps in [Sign::Plus, Sign::Minus] {
                let name = format!("find_q p={p} a={a} eps={eps}");
                match find_q(p, a, eps, DEFAULT_SEARCH_BOUND, false) {
                    Ok((r, q)) => {
                        let v = vp_big(p, &q_minus_eps(&q, eps).unwrap());
                        out.push(check(&name, v == Some(a), format!("r = {r}, q = {q}, v = {v:?}")));
                        if p > 7 {
                            continue;
                        }
                        for a_j in 0..=3u32 {
                            let e = eps.delta() * crate::arith::pow_u64(p, a_j) as u32;
                            if q.pow(e) > cap {
                                continue;
                            }
                            let vr = vp_big(p, &torus_ratio(&q, eps.delta(), p, a_j));
                            out.push(check(
                                format!("torus ratio p={p} q={q} eps={eps} a_j={a_j}"),
                                vr == Some(a_j),
                                format!("v = {vr:?}"),
                            ));
                        }
                    }
                    Err(e) => out.push(check(&name, false, e.to_string())),
                }
            }
        }
    }
    out
}

/// Writes the fixture files for every group into `dir`.
pub fn write_fixtures(dir: &std::path::Path, seed: u64) -> Result<Vec<PathBuf>, String> {
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let mut paths = Vec::new();
    for (name, n, q, eps) in FIXTURE_GROUPS {
        let f = generate_fixture(name, n, q, eps, seed).map_err(|e| e.to_string())?;
        f.save(dir).map_err(|e| e.to_string())?;
        paths.push(dir.join(format!("{name}.json")));
    }
    Ok(paths)
}
