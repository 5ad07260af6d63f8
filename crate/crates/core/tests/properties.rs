use causalkit::duality::{check_duality_with_tol, gyni_to_dr, Direction};
use causalkit::games::{
    eval_dr_with, joint_probability, outcome_distribution, Encoder, GameStrategy,
};
use causalkit::instruments::{
    choi_of_unitary, coarse_grain, conjugate_instrument, validate_instrument, Instrument,
};
use causalkit::processes::{
    check_order, is_ppt_cut, mixture, validate_process, CausalOrder, ProcessMatrix,
};
use causalkit::random::{
    random_channel, random_dr_strategy, random_gyni_strategy, random_instrument, random_process,
    random_state, random_unitary, rng,
};
use causalkit::tensor::{
    eigenvalues, kron, min_eigenvalue, partial_trace, partial_transpose, permute_wires,
    trace_and_replace,
};
use causalkit::{LabeledOperator, WireLabel};
use proptest::prelude::*;
use rand::Rng;

fn general_op(seed: u64, names: &[&str], dims: &[usize]) -> LabeledOperator {
    let mut r = rng(seed);
    let wires: Vec<WireLabel> = names
        .iter()
        .zip(dims)
        .map(|(n, d)| WireLabel::new(*n, *d))
        .collect();
    let n: usize = dims.iter().product();
    let rho = random_state(&mut r, wires.clone());
    let u = random_unitary(&mut r, n);
    LabeledOperator::new(wires, u * rho.data()).unwrap()
}

fn dims() -> impl Strategy<Value = usize> {
    2usize..=3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn kron_is_associative(seed in any::<u64>(), da in dims(), db in dims(), dc in dims()) {
        let a = general_op(seed, &["A"], &[da]);
        let b = general_op(seed ^ 1, &["B"], &[db]);
        let c = general_op(seed ^ 2, &["C"], &[dc]);
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>(), two in any::<bool>()) {
        let a = general_op(seed, &["A", "A2"], &[2, 3]);
        let b = if two {
            general_op(seed ^ 7, &["B", "B2"], &[3, 2])
        } else {
            general_op(seed ^ 7, &["B", "B2", "B3"], &[2, 2, 2])
        };
        let names = b.wire_names();
        let reduced = partial_trace(&kron(&a, &b).unwrap(), &names).unwrap();
        let expected = a.scale(b.trace());
        prop_assert!(reduced.max_abs_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn partial_transpose_involution(seed in any::<u64>(), d in dims()) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, vec![WireLabel::new("A", d), WireLabel::new("B", 2), WireLabel::new("C", d)]);
        let once = partial_transpose(&rho, &["B", "C"]).unwrap();
        let twice = partial_transpose(&once, &["B", "C"]).unwrap();
        prop_assert!(twice.max_abs_diff(&rho).unwrap() < 1e-15);
        prop_assert!((once.trace() - rho.trace()).norm() < 1e-12);
        prop_assert!(once.hermitian_deviation() < 1e-12);
    }

    #[test]
    fn permutation_keeps_spectrum(seed in any::<u64>(), d in dims()) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, vec![WireLabel::new("A", d), WireLabel::new("B", 2), WireLabel::new("C", 3)]);
        let moved = permute_wires(&rho, &["C", "A", "B"]).unwrap();
        let mut x = eigenvalues(&rho).unwrap();
        let mut y = eigenvalues(&moved).unwrap();
        x.sort_by(f64::total_cmp);
        y.sort_by(f64::total_cmp);
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p - q).abs() < 1e-9);
        }
    }

    #[test]
    fn trace_and_replace_is_idempotent(seed in any::<u64>(), d in dims()) {
        let w = general_op(seed, &["A", "B", "C"], &[d, 2, d]);
        let once = trace_and_replace(&w, &["B"]).unwrap();
        let twice = trace_and_replace(&once, &["B"]).unwrap();
        prop_assert!(twice.max_abs_diff(&once).unwrap() < 1e-12);
        prop_assert!((once.trace() - w.trace()).norm() < 1e-12);
    }

    #[test]
    fn psd_has_nonnegative_spectrum(seed in any::<u64>(), d in dims()) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, vec![WireLabel::new("A", d), WireLabel::new("B", d)]);
        prop_assert!(min_eigenvalue(&rho).unwrap() >= -1e-9);
    }
}

fn two_random_processes(seed: u64, d: usize) -> (ProcessMatrix, ProcessMatrix) {
    let mut r = rng(seed);
    (
        random_process(&mut r, d).unwrap(),
        random_process(&mut r, d).unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn valid_process_trace(seed in any::<u64>(), d in dims()) {
        let (w, _) = two_random_processes(seed, d);
        prop_assert!(validate_process(&w).unwrap().valid);
        prop_assert!((w.op().trace().re - (d * d) as f64).abs() < 1e-9);
    }

    #[test]
    fn ppt_side_symmetric(seed in any::<u64>()) {
        let (w, _) = two_random_processes(seed, 2);
        let (a, _) = is_ppt_cut(&w, "A").unwrap();
        let (b, _) = is_ppt_cut(&w, "B").unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn mixtures_stay_valid(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let (w1, w2) = two_random_processes(seed, 2);
        let m = mixture(&[(p, &w1), (1.0 - p, &w2)]).unwrap();
        let r = validate_process(&m).unwrap();
        prop_assert!(r.valid, "{:?}", r);
    }

    #[test]
    fn ordered_implies_valid(seed in any::<u64>(), d in dims()) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, vec![WireLabel::new("A_I", d)]);
        let ch = random_channel(&mut r, WireLabel::new("A_O", d), WireLabel::new("B_I", d)).unwrap();
        let w = causalkit::processes::channel_process_a_before_b(&rho, &ch, d).unwrap();
        prop_assert!(check_order(&w, CausalOrder::AbeforeB).unwrap().valid);
        prop_assert!(validate_process(&w).unwrap().valid);
    }
}

fn random_qudit_instrument(seed: u64, d: usize, n: usize) -> Instrument {
    random_instrument(
        &mut rng(seed),
        vec![WireLabel::new("X_I", d)],
        vec![WireLabel::new("X_O", d)],
        n,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugation_keeps_cptp(seed in any::<u64>(), d in dims(), n in 1usize..4) {
        let ins = random_qudit_instrument(seed, d, n);
        let u = random_unitary(&mut rng(seed ^ 3), d);
        let conj = conjugate_instrument(&ins, &u, "X_I").unwrap();
        prop_assert_eq!(conj.len(), ins.len());
        prop_assert!((conj.cptp_residual().unwrap() - ins.cptp_residual().unwrap()).abs() < 1e-12);
        prop_assert!(validate_instrument(&conj).unwrap().valid);
    }

    #[test]
    fn unitary_choi_is_rank_one(seed in any::<u64>(), d in dims()) {
        let u = random_unitary(&mut rng(seed), d);
        let m = choi_of_unitary(&u, WireLabel::new("X_I", d), WireLabel::new("X_O", d)).unwrap();
        let mut ev = eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| b.total_cmp(a));
        prop_assert!((ev[0] - d as f64).abs() < 1e-9);
        prop_assert!(ev[1].abs() <= 1e-9);
    }

    #[test]
    fn coarse_graining_keeps_validity(seed in any::<u64>(), d in dims(), n in 2usize..5) {
        let ins = random_qudit_instrument(seed, d, n);
        let merged = coarse_grain(&ins, |k| k % 2, 2).unwrap();
        prop_assert!(validate_instrument(&merged).unwrap().valid);
        prop_assert!(merged.total().max_abs_diff(&ins.total()).unwrap() < 1e-12);
    }
}

fn random_strategy(seed: u64, d: usize, dr: bool) -> GameStrategy {
    let mut r = rng(seed);
    if dr {
        random_dr_strategy(&mut r, d).unwrap()
    } else {
        random_gyni_strategy(&mut r, d).unwrap()
    }
}

fn relabel(ins: &Instrument, perm: &[usize]) -> Instrument {
    let mut outcomes = ins.outcomes.clone();
    for (k, &p) in perm.iter().enumerate() {
        outcomes[p] = ins.outcomes[k].clone();
    }
    Instrument::new(ins.input_wires.clone(), ins.output_wires.clone(), outcomes).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn probabilities_normalized(seed in any::<u64>(), d in dims(), dr in any::<bool>()) {
        let s = random_strategy(seed, d, dr);
        for i1 in 0..d {
            for i2 in 0..d {
                let dist = outcome_distribution(&s, [i1, i2]).unwrap();
                let total: f64 = dist.iter().flatten().sum();
                prop_assert!((total - 1.0).abs() <= 1e-9, "seed {} total {}", seed, total);
                for p in dist.iter().flatten() {
                    prop_assert!((-1e-9..=1.0 + 1e-9).contains(p));
                }
            }
        }
    }

    #[test]
    fn qubit_encoder_matches_general(seed in any::<u64>()) {
        let s = random_strategy(seed, 2, true);
        let a = eval_dr_with(&s, Encoder::Bell).unwrap().value;
        let b = eval_dr_with(&s, Encoder::BellQubit).unwrap().value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn outcome_relabeling(seed in any::<u64>(), d in dims()) {
        let s = random_strategy(seed, d, false);
        let mut perm: Vec<usize> = (0..d).collect();
        perm.rotate_left(rng(seed).random_range(0..d));
        let mut t = s.clone();
        t.alice = s.alice.iter().map(|ins| relabel(ins, &perm)).collect();
        for i1 in 0..d {
            for (a, &pa) in perm.iter().enumerate() {
                let x = joint_probability(&s, [i1, 0], [a, 0]).unwrap();
                let y = joint_probability(&t, [i1, 0], [pa, 0]).unwrap();
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn duality_preserves_value(seed in any::<u64>(), d in dims(), dr in any::<bool>()) {
        let s = random_strategy(seed, d, dr);
        let dir = if dr { Direction::DrToGyni } else { Direction::GyniToDr };
        let cert = check_duality_with_tol(&s, dir, f64::INFINITY).unwrap();
        prop_assert!(cert.gap() <= 1e-9, "seed {} gap {}", seed, cert.gap());
    }

    #[test]
    fn dual_instruments_valid(seed in any::<u64>()) {
        let s = gyni_to_dr(&random_strategy(seed, 2, false)).unwrap();
        for ins in s.alice.iter().chain(&s.bob) {
            prop_assert!(validate_instrument(ins).unwrap().valid);
        }
    }
}

#[test]
fn general_op_is_not_hermitian() {
    let op = general_op(1, &["A"], &[3]);
    assert!(op.hermitian_deviation() > 1e-3);
}
