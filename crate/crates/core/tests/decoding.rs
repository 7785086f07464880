use std::collections::BTreeMap;

use aircode::decoder::{
    all_plans, check_plan, closed_form_nu, decode, in_window, verify_reduced_side_information, DecodeCase,
};
use aircode::encoder::{encode_matrix, MessageVector};
use aircode::ff_matrix::BitVector;
use aircode::geometry::up_distance;
use aircode::AirMatrix;
use proptest::prelude::*;

fn air(k: usize, d: usize) -> AirMatrix {
    AirMatrix::from_params(k, d).unwrap()
}

#[test]
fn round_trip_up_to_20() {
    for k in 2..=20 {
        for d in 1..k {
            let r = verify_reduced_side_information(&air(k, d), 16, 500, k as u64 * 100 + d as u64);
            assert!(r.passed(), "{:?}", r.failures);
            assert_eq!(r.vectors, if k <= 16 { 1 << k } else { 500 });
        }
    }
}

#[test]
fn reduced_side_information_examples() {
    assert!(verify_reduced_side_information(&air(13, 3), 16, 0, 0).passed());
    assert!(verify_reduced_side_information(&air(2, 1), 16, 0, 0).passed());
    let r = verify_reduced_side_information(&air(17, 7), 0, 10_000, 1);
    assert!(r.passed());
    assert_eq!(r.decodes, 170_000);
}

#[test]
fn wrapped_receivers() {
    for k in 2..=64 {
        for d in 1..k {
            let m = air(k, d);
            let n = k - d;
            for plan in all_plans(&m).into_iter().filter(|p| p.k >= n) {
                assert_eq!(plan.case, DecodeCase::CaseIV);
                let col = plan.k % n;
                if d < k.div_ceil(2) {
                    assert_eq!(m.column_support(col).unwrap().len(), 2, "K={k} D={d} k={}", plan.k);
                } else {
                    assert_eq!(up_distance(&m, plan.k, col).unwrap(), n, "K={k} D={d} k={}", plan.k);
                }
            }
        }
    }
}

#[test]
fn closed_form_side_terms_up_to_44() {
    for k in 2..=44 {
        for d in 1..k {
            let m = air(k, d);
            for plan in all_plans(&m) {
                let nu = closed_form_nu(&m, plan.k).unwrap();
                let mut count: BTreeMap<usize, usize> = BTreeMap::new();
                for (_, terms) in &nu {
                    for &t in terms {
                        assert!(in_window(plan.k, t, k, d));
                        *count.entry(t).or_default() += 1;
                    }
                }
                let odd: Vec<usize> = count.into_iter().filter(|(_, c)| c % 2 == 1).map(|(t, _)| t).collect();
                assert_eq!(odd, plan.gamma, "K={k} D={d} k={}", plan.k);
            }
        }
    }
}

proptest! {
    #[test]
    fn decode_recovers_every_message(
        (k, d) in (2usize..=64).prop_flat_map(|k| (Just(k), 1..k)),
        bits in proptest::collection::vec(any::<bool>(), 64),
    ) {
        let m = air(k, d);
        let x = MessageVector(BitVector::from_bits(bits[..k].iter().copied()));
        let c = encode_matrix(&m, &x).unwrap();
        for plan in all_plans(&m) {
            prop_assert!(check_plan(&m, &plan).is_ok());
            let side: BTreeMap<usize, bool> = plan.gamma.iter().map(|&i| (i, x.get(i))).collect();
            prop_assert_eq!(decode(&plan, &c, &side).unwrap(), x.get(plan.k));
        }
    }
}
