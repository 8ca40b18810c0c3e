use num_bigint::BigUint;
use proptest::prelude::*;

use cycblock::arith::{is_prime, vp_big};
use cycblock::classify::classify;
use cycblock::labels::{enumerate_admissible, Label, Residue};
use cycblock::params::{q_minus_eps, Sign};
use cycblock::synth::{
    central_split, find_q, realize, three_factor, two_factor, verify_witness, Construction, SynthError, Witness,
    DEFAULT_SEARCH_BOUND,
};

fn lab(l: usize, e: &[usize]) -> Label {
    Label::new(l, e.to_vec()).unwrap()
}

/// Smallest prime `r` with `v_p(r − ε) = 1`, found by plain trial division.
fn smallest_r(p: u64, eps: Sign) -> u64 {
    (2u64..)
        .find(|&r| {
            let prime = (2..r).take_while(|d| d * d <= r).all(|d| r % d != 0);
            let x = if eps == Sign::Plus { r - 1 } else { r + 1 };
            prime && x % p == 0 && x % (p * p) != 0
        })
        .unwrap()
}

#[test]
fn find_q_examples() {
    assert_eq!(find_q(3, 2, Sign::Minus, DEFAULT_SEARCH_BOUND, false).unwrap(), (2, BigUint::from(8u32)));
    assert_eq!(find_q(3, 1, Sign::Minus, DEFAULT_SEARCH_BOUND, true).unwrap(), (5, BigUint::from(5u32)));
    assert_eq!(find_q(5, 1, Sign::Plus, DEFAULT_SEARCH_BOUND, false).unwrap(), (11, BigUint::from(11u32)));
    assert!(matches!(find_q(13, 1, Sign::Plus, 20, false), Err(SynthError::SearchExhausted { .. })));
}

proptest! {
    #[test]
    fn find_q_is_minimal_and_exact(
        p in prop_oneof![Just(3u64), Just(5), Just(7), Just(11), Just(13), Just(17)],
        a in 1u32..=4,
        plus in any::<bool>(),
    ) {
        let eps = if plus { Sign::Plus } else { Sign::Minus };
        let (r, q) = find_q(p, a, eps, DEFAULT_SEARCH_BOUND, false).unwrap();
        prop_assert!(is_prime(r));
        prop_assert_eq!(r, smallest_r(p, eps));
        prop_assert_eq!(&q, &BigUint::from(r).pow(p.pow(a - 1) as u32));
        prop_assert_eq!(vp_big(p, &q_minus_eps(&q, eps).unwrap()), Some(a));
    }
}

#[test]
fn every_label_up_to_length_five_round_trips_except_one() {
    let mut missing = Vec::new();
    for (p, residue) in [(5u64, Residue::One), (13, Residue::One), (3, Residue::Three), (7, Residue::Three)] {
        for l in 1..=5 {
            for a in enumerate_admissible(l, residue) {
                match realize(p, &a, residue, DEFAULT_SEARCH_BOUND) {
                    Ok(w) => {
                        assert_eq!(w.target, a);
                        assert_eq!(classify(&w.config).unwrap().label, a);
                        let report = verify_witness(&w);
                        assert!(report.all_pass(), "p = {p}, {a}: {:?}", report.failed());
                    }
                    Err(SynthError::NoConstruction { label, .. }) => missing.push((p, label)),
                    Err(e) => panic!("p = {p}, {a}: {e}"),
                }
            }
        }
    }
    // the interval [1, 2] at l = 5 lies outside every construction family
    assert_eq!(missing, vec![(3, lab(5, &[1, 2])), (7, lab(5, &[1, 2]))]);
}

#[test]
fn documented_witnesses() {
    let w = realize(3, &lab(2, &[1]), Residue::Three, DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!(w.construction, Construction::CentralSplit);
    assert_eq!((w.config.a, w.config.c, w.config.c_prime), (2, 1, 0));
    assert_eq!((w.q.clone(), w.n.clone()), (BigUint::from(8u32), BigUint::from(6u32)));
    let dims: Vec<u64> = w.config.factors.iter().map(|f| f.m_j).collect();
    assert_eq!(dims, vec![5, 1]);

    let w = realize(3, &lab(2, &[]), Residue::Three, DEFAULT_SEARCH_BOUND).unwrap();
    assert!(w.target.is_empty());

    let w = three_factor(3, 2, 1, DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!(w.target, lab(3, &[1, 2]));
    assert_eq!(w.n, BigUint::from(9u32));
    assert_eq!(w.y_order, BigUint::from(9u32));
    assert_eq!(w.construction_tag(), "P4.6");
}

#[test]
fn two_factor_equal_degrees_use_five_copies_for_p_three() {
    let w = two_factor(3, 2, 1, 1, 1, DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!(w.n, BigUint::from(15u32));
    assert!(verify_witness(&w).all_pass());
    let w = two_factor(7, 2, 1, 1, 1, DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!(w.n, BigUint::from(21u32));
    assert!(verify_witness(&w).all_pass());
}

#[test]
fn rejects_bad_requests() {
    assert!(matches!(
        realize(3, &lab(4, &[1, 3]), Residue::One, DEFAULT_SEARCH_BOUND),
        Err(SynthError::ResidueMismatch { .. })
    ));
    assert!(matches!(
        realize(5, &lab(4, &[1, 3]), Residue::One, DEFAULT_SEARCH_BOUND),
        Err(SynthError::NotAdmissible { .. })
    ));
    assert!(matches!(
        realize(3, &lab(6, &[1, 3, 5]), Residue::Three, DEFAULT_SEARCH_BOUND),
        Err(SynthError::NotAdmissible { .. })
    ));
    assert!(matches!(realize(9, &lab(2, &[1]), Residue::One, DEFAULT_SEARCH_BOUND), Err(SynthError::BadPrime(9))));
}

fn tampered(mut w: Witness, f: impl FnOnce(&mut Witness)) -> Vec<String> {
    f(&mut w);
    verify_witness(&w).failed().into_iter().map(|c| c.name.clone()).collect()
}

#[test]
fn verification_catches_tampering() {
    let w = central_split(3, 2, 1, 0, true, DEFAULT_SEARCH_BOUND).unwrap();
    assert!(verify_witness(&w).all_pass());

    let failed = tampered(w.clone(), |w| w.config.c_prime = 2);
    assert!(failed.contains(&"validate".to_string()), "{failed:?}");

    let failed = tampered(w.clone(), |w| w.q = &w.q * 2u32);
    assert!(failed.contains(&"q-valuation".to_string()) || failed.contains(&"q-prime-power".to_string()), "{failed:?}");

    let failed = tampered(w.clone(), |w| w.target = lab(2, &[]));
    assert!(failed.contains(&"round-trip".to_string()), "{failed:?}");

    let failed = tampered(w, |w| w.n += 1u32);
    assert_eq!(failed, vec!["dimension".to_string()]);
}

#[test]
fn witness_json_round_trip() {
    let w = realize(7, &lab(4, &[1, 2, 3]), Residue::Three, DEFAULT_SEARCH_BOUND).unwrap();
    let s = serde_json::to_string(&w).unwrap();
    assert!(s.contains("\"construction\":\"P4.2\""));
    let back: Witness = serde_json::from_str(&s).unwrap();
    assert_eq!(back, w);
    let mut v: serde_json::Value = serde_json::from_str(&s).unwrap();
    v["unexpected"] = serde_json::json!(1);
    assert!(serde_json::from_value::<Witness>(v).is_err());
}
