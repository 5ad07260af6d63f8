//! A fixed list of headline numbers, each recomputed and compared with its
//! known value.

use serde::{Deserialize, Serialize};

use crate::classical::{
    e_bw, ftdr_success, tdr_breakdown, tdr_success_definite_order, tdr_success_no_collab,
    two_copy_decode_success, FreeBit, Layout, Prob, TdrStrategy,
};
use crate::duality::{
    check_duality_with_tol, controlled_shift, fourier, gyni_to_dr, xor_precheck, Direction,
    DualityCertificate,
};
use crate::games::{
    cyril_instruments, cyril_value, eval_dr, eval_gyni, hiding_deviation, outcome_distribution,
    pauli_y_baseline_strategy, pauli_y_table, Encoder, Encoding, GameStrategy,
};
use crate::instruments::validate_instrument;
use crate::processes::{
    build_cyril, is_ppt_cut, no_signaling_process, validate_process_with_tol,
    verify_cyril_separable_decomposition, ProcessMatrix,
};
use crate::random::{random_dr_strategy, random_gyni_strategy, rng};
use crate::tensor::{c, CMatrix, LabeledOperator, ZERO};

/// `x` with 17 significant digits; scientific outside `[1e-4, 1e16)`.
pub fn sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..16).contains(&mag) {
        return format!("{x:.16e}");
    }
    let prec = (16 - mag) as usize;
    format!("{x:.prec$}")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Value {
    Exact {
        numerator: u64,
        denominator: u64,
        fraction: String,
        decimal: String,
    },
    Surd {
        closed_form: String,
        decimal: String,
    },
    Real {
        decimal: String,
    },
    Flag {
        value: bool,
    },
}

impl Value {
    pub fn exact(p: Prob) -> Self {
        let (n, d) = (*p.numer(), *p.denom());
        Value::Exact {
            numerator: n,
            denominator: d,
            fraction: format!("{n}/{d}"),
            decimal: sig17(n as f64 / d as f64),
        }
    }

    pub fn surd(closed_form: &str, x: f64) -> Self {
        Value::Surd {
            closed_form: closed_form.into(),
            decimal: sig17(x),
        }
    }

    pub fn real(x: f64) -> Self {
        Value::Real { decimal: sig17(x) }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Exact {
                numerator,
                denominator,
                ..
            } => Some(*numerator as f64 / *denominator as f64),
            Value::Surd { decimal, .. } | Value::Real { decimal } => decimal.parse().ok(),
            Value::Flag { .. } => None,
        }
    }

    /// Human-readable form.
    pub fn display(&self) -> String {
        match self {
            Value::Exact {
                fraction, decimal, ..
            } => format!("{fraction} ({decimal})"),
            Value::Surd {
                closed_form,
                decimal,
            } => format!("{closed_form} ({decimal})"),
            Value::Real { decimal } => decimal.clone(),
            Value::Flag { value } => value.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproductionRecord {
    pub claim_id: String,
    pub command: String,
    pub expected: Value,
    pub computed: Value,
    pub tolerance: f64,
    pub status: Status,
}

fn compare(expected: &Value, computed: &Value, tol: f64) -> bool {
    match (expected, computed) {
        (
            Value::Exact {
                numerator: a,
                denominator: b,
                ..
            },
            Value::Exact {
                numerator: x,
                denominator: y,
                ..
            },
        ) => a == x && b == y,
        (Value::Flag { value: a }, Value::Flag { value: b }) => a == b,
        (e, c) => match (e.as_f64(), c.as_f64()) {
            (Some(x), Some(y)) => (x - y).abs() <= tol,
            _ => false,
        },
    }
}

fn record(
    claim_id: &str,
    command: &str,
    expected: Value,
    computed: crate::Result<Value>,
    tol: f64,
) -> ReproductionRecord {
    let (computed, ok) = match computed {
        Ok(v) => {
            let ok = compare(&expected, &v, tol);
            (v, ok)
        }
        Err(e) => (
            Value::Surd {
                closed_form: format!("error: {e}"),
                decimal: "NaN".into(),
            },
            false,
        ),
    };
    let tolerance = match expected {
        Value::Exact { .. } if matches!(computed, Value::Exact { .. }) => 0.0,
        Value::Flag { .. } => 0.0,
        _ => tol,
    };
    ReproductionRecord {
        claim_id: claim_id.into(),
        command: command.into(),
        expected,
        computed,
        tolerance,
        status: if ok { Status::Pass } else { Status::Fail },
    }
}

/// Inputs the manifest is computed from; swapping in a damaged process shows
/// which records depend on it.
#[derive(Clone, Debug)]
pub struct Fixtures {
    pub cyril: ProcessMatrix,
}

impl Default for Fixtures {
    fn default() -> Self {
        Self {
            cyril: build_cyril(),
        }
    }
}

pub const CYRIL_CLOSED_FORM: &str = "5/16(1+1/sqrt2)";

/// The Cyril strategy on the given process.
pub fn cyril_strategy_on(w: &ProcessMatrix) -> crate::Result<GameStrategy> {
    GameStrategy::gyni(
        w.clone(),
        Vec::new(),
        cyril_instruments("A_I", "A_O"),
        cyril_instruments("B_I", "B_O"),
        2,
    )
}

/// `(x, alice up, bob up, success)` rows expected from the Pauli-Y baseline.
pub const PAULI_Y_TABLE: [([usize; 2], bool, bool, bool); 8] = [
    ([0, 0], true, false, true),
    ([0, 0], false, true, false),
    ([0, 1], true, true, true),
    ([0, 1], false, false, false),
    ([1, 0], true, true, false),
    ([1, 0], false, false, true),
    ([1, 1], true, false, false),
    ([1, 1], false, true, true),
];

pub fn pauli_y_table_matches() -> crate::Result<bool> {
    let rows = pauli_y_table(&pauli_y_baseline_strategy())?;
    if rows.len() != PAULI_Y_TABLE.len() {
        return Ok(false);
    }
    Ok(PAULI_Y_TABLE.iter().all(|(x, au, bu, ok)| {
        rows.iter().any(|r| {
            r.x == *x
                && r.alice_up == *au
                && r.bob_up == *bu
                && r.success == *ok
                && (r.probability - 0.5).abs() <= 1e-12
        })
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeededCertificate {
    pub seed: u64,
    pub certificate: DualityCertificate,
}

/// Certificates for `n` seeded random strategies, one GYNI and one DR
/// strategy per seed. Violations are reported through the gap, not as errors.
pub fn random_duality_certificates(
    d: usize,
    n: u64,
    seed0: u64,
) -> crate::Result<Vec<SeededCertificate>> {
    let mut out = Vec::with_capacity(2 * n as usize);
    for seed in seed0..seed0 + n {
        let mut r = rng(seed);
        let g = random_gyni_strategy(&mut r, d)?;
        let dr = random_dr_strategy(&mut r, d)?;
        for (s, dir) in [(g, Direction::GyniToDr), (dr, Direction::DrToGyni)] {
            out.push(SeededCertificate {
                seed,
                certificate: check_duality_with_tol(&s, dir, f64::INFINITY)?,
            });
        }
    }
    Ok(out)
}

pub fn max_gap(certs: &[SeededCertificate]) -> f64 {
    certs
        .iter()
        .map(|c| c.certificate.gap())
        .fold(0.0, f64::max)
}

/// Largest duality gap over `n` seeded random strategies in each direction.
pub fn random_duality_gap(d: usize, n: u64, seed0: u64) -> crate::Result<f64> {
    Ok(max_gap(&random_duality_certificates(d, n, seed0)?))
}

/// Largest `|Σ_outcomes P − 1|` over every input of `n` random strategies
/// per dimension and game.
pub fn random_normalization_gap(n: u64, seed0: u64) -> crate::Result<f64> {
    let mut worst = 0.0f64;
    for d in [2, 3] {
        for k in 0..n {
            let mut r = rng(seed0 + k);
            let strategies = [
                random_gyni_strategy(&mut r, d)?,
                random_dr_strategy(&mut r, d)?,
            ];
            for s in &strategies {
                for i1 in 0..d {
                    for i2 in 0..d {
                        let total: f64 = outcome_distribution(s, [i1, i2])?.iter().flatten().sum();
                        worst = worst.max((total - 1.0).abs());
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// Largest CPTP residual among the built-in instrument constructors.
pub fn constructor_cptp_residual() -> crate::Result<f64> {
    let mut worst = 0.0f64;
    let mut all = cyril_instruments("X_I", "X_O");
    all.extend(crate::games::cyril_instruments_as_printed("X_I", "X_O"));
    let y = pauli_y_baseline_strategy();
    all.extend(y.alice.iter().cloned());
    all.extend(y.bob.iter().cloned());
    for d in [2, 3] {
        let c = crate::games::constant_guess_strategy(crate::games::Game::Dr { d })?;
        all.extend(c.alice.iter().cloned());
    }
    let dual = gyni_to_dr(&crate::games::cyril_gyni_strategy())?;
    all.extend(dual.alice.iter().cloned());
    all.extend(dual.bob.iter().cloned());
    for ins in &all {
        let r = validate_instrument(ins)?;
        if !r.psd_ok {
            return Ok(f64::INFINITY);
        }
        worst = worst.max(r.max_residual());
    }
    Ok(worst)
}

/// Largest marginal deviation from `I/d` over the implemented encoders.
pub fn encoder_hiding_gap() -> crate::Result<f64> {
    let mut worst = 0.0f64;
    for (encoder, d) in [
        (Encoder::Bell, 2),
        (Encoder::BellQubit, 2),
        (Encoder::Bell, 3),
    ] {
        let e = Encoding {
            alice_wire: "A".into(),
            bob_wire: "B".into(),
            encoder,
        };
        worst = worst.max(hiding_deviation(&e, d)?);
    }
    Ok(worst)
}

fn hadamard_and_cnot_exact() -> crate::Result<bool> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = CMatrix::from_fn(2, 2, |r, col| {
        c(if r == 1 && col == 1 { -s } else { s }, 0.0)
    });
    let perm = [0usize, 1, 3, 2];
    let cnot = CMatrix::from_fn(
        4,
        4,
        |r, col| if perm[col] == r { c(1.0, 0.0) } else { ZERO },
    );
    Ok(fourier(2)? == h && controlled_shift(2)? == cnot)
}

/// `phi+` on the two input wires, identity on the outputs.
pub fn phi_plus_process() -> crate::Result<ProcessMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let rho = LabeledOperator::from_ket(
        vec![
            crate::WireLabel::qubit("A_I"),
            crate::WireLabel::qubit("B_I"),
        ],
        &[c(s, 0.0), ZERO, ZERO, c(s, 0.0)],
    )?;
    no_signaling_process(&rho, 2)
}

const EBW_TABLE: [([u8; 3], [u8; 3]); 8] = [
    ([0, 0, 0], [0, 0, 0]),
    ([0, 0, 1], [1, 0, 0]),
    ([0, 1, 0], [0, 0, 1]),
    ([0, 1, 1], [0, 0, 1]),
    ([1, 0, 0], [0, 1, 0]),
    ([1, 0, 1], [1, 0, 0]),
    ([1, 1, 0], [0, 1, 0]),
    ([1, 1, 1], [0, 0, 0]),
];

pub fn ebw_table_matches() -> bool {
    EBW_TABLE.iter().all(|(o, i)| e_bw(*o) == *i)
}

pub fn run_manifest(tol: f64) -> Vec<ReproductionRecord> {
    run_manifest_with(&Fixtures::default(), tol)
}

pub fn run_manifest_with(fx: &Fixtures, tol: f64) -> Vec<ReproductionRecord> {
    let mut out = Vec::new();
    let surd = Value::surd(CYRIL_CLOSED_FORM, cyril_value());
    let flag = |b: bool| Value::Flag { value: b };
    let exact = |n: u64, d: u64| Value::exact(Prob::new(n, d));

    out.push(record(
        "gyni-cyril",
        "causalkit gyni --process cyril",
        surd.clone(),
        cyril_strategy_on(&fx.cyril)
            .and_then(|s| eval_gyni(&s))
            .map(|v| Value::real(v.value)),
        tol,
    ));
    out.push(record(
        "cyril-valid",
        "causalkit validate --process cyril",
        flag(true),
        validate_process_with_tol(&fx.cyril, tol).map(|r| flag(r.valid)),
        tol,
    ));
    out.push(record(
        "cyril-separable",
        "causalkit manifest",
        Value::real(0.0),
        Ok(Value::real(verify_cyril_separable_decomposition())),
        tol,
    ));
    out.push(record(
        "ppt-cyril",
        "causalkit ppt --process cyril --cut B",
        flag(true),
        is_ppt_cut(&fx.cyril, "B").map(|(p, _)| flag(p)),
        tol,
    ));
    out.push(record(
        "npt-phi-plus",
        "causalkit ppt --process phi-plus --cut B",
        flag(false),
        phi_plus_process()
            .and_then(|w| is_ppt_cut(&w, "B"))
            .map(|(p, _)| flag(p)),
        tol,
    ));
    out.push(record(
        "drb-pauli-y",
        "causalkit drb --strategy pauli-y",
        exact(1, 2),
        eval_dr(&pauli_y_baseline_strategy()).map(|v| Value::real(v.value)),
        tol,
    ));
    out.push(record(
        "drb-pauli-y-table",
        "causalkit drb --strategy pauli-y",
        flag(true),
        pauli_y_table_matches().map(flag),
        tol,
    ));
    out.push(record(
        "drb-cyril-dual",
        "causalkit drb --strategy cyril-dual",
        surd,
        cyril_strategy_on(&fx.cyril)
            .and_then(|s| gyni_to_dr(&s))
            .and_then(|s| eval_dr(&s))
            .map(|v| Value::real(v.value)),
        tol,
    ));
    out.push(record(
        "duality-random-d2",
        "causalkit duality --random 20 --d 2 --seed 1000",
        Value::real(0.0),
        random_duality_gap(2, 20, 1000).map(Value::real),
        tol,
    ));
    out.push(record(
        "duality-random-d3",
        "causalkit duality --random 10 --d 3 --seed 2000",
        Value::real(0.0),
        random_duality_gap(3, 10, 2000).map(Value::real),
        tol,
    ));
    out.push(record(
        "qudit-unitaries",
        "causalkit dump --object fourier:2; causalkit dump --object cshift:2",
        flag(true),
        hadamard_and_cnot_exact().map(flag),
        tol,
    ));
    out.push(record(
        "xor-precheck",
        "causalkit duality --precheck",
        Value::real(1.0),
        xor_precheck(2)
            .and_then(|a| xor_precheck(3).map(|b| a.min(b)))
            .map(Value::real),
        tol,
    ));

    let bw = || tdr_breakdown(TdrStrategy::Ebw, Layout::Clockwise, FreeBit::FirstListed);
    out.push(record(
        "tdr-ebw",
        "causalkit classical tdr --strategy ebw --exact",
        exact(27, 32),
        bw().map(|b| Value::exact(b.total)),
        tol,
    ));
    out.push(record(
        "tdr-ebw-per-input",
        "causalkit classical tdr --strategy ebw --exact",
        flag(true),
        bw().map(|b| {
            flag(b.per_input.len() == 64 && b.per_input.iter().all(|p| *p == Prob::new(27, 32)))
        }),
        tol,
    ));
    out.push(record(
        "tdr-ebw-majority",
        "causalkit classical tdr --strategy ebw --exact",
        exact(27, 32),
        bw().map(|b| {
            match (
                b.p_majority_zero,
                b.success_given_majority_zero,
                b.success_given_majority_one,
            ) {
                (Some(p), Some(s0), Some(s1)) if s0 == Prob::new(1, 1) && s1 == Prob::new(0, 1) => {
                    Value::exact(p)
                }
                _ => flag(false),
            }
        }),
        tol,
    ));
    out.push(record(
        "tdr-no-collab",
        "causalkit classical tdr --strategy none --exact",
        exact(27, 64),
        Ok(Value::exact(tdr_success_no_collab())),
        tol,
    ));
    out.push(record(
        "tdr-definite",
        "causalkit classical tdr --strategy definite --exact",
        exact(3, 4),
        Ok(Value::exact(tdr_success_definite_order())),
        tol,
    ));
    out.push(record(
        "ftdr-definite",
        "causalkit classical ftdr --strategy definite --exact",
        exact(21, 32),
        ftdr_success(TdrStrategy::DefiniteOrder).map(|v| Value::exact(v.total)),
        tol,
    ));
    out.push(record(
        "ftdr-ebw",
        "causalkit classical ftdr --strategy ebw --exact",
        exact(27, 32),
        ftdr_success(TdrStrategy::Ebw).map(|v| Value::exact(v.total)),
        tol,
    ));
    out.push(record(
        "ebw-table",
        "causalkit dump --object ebw",
        flag(true),
        Ok(flag(ebw_table_matches())),
        tol,
    ));
    out.push(record(
        "two-copy-decode",
        "causalkit classical two-copy --exact",
        exact(1, 1),
        Ok(Value::exact(two_copy_decode_success())),
        tol,
    ));
    out.push(record(
        "instrument-cptp",
        "causalkit manifest",
        Value::real(0.0),
        constructor_cptp_residual().map(Value::real),
        tol,
    ));
    out.push(record(
        "normalization-random",
        "causalkit manifest",
        Value::real(0.0),
        random_normalization_gap(5, 3000).map(Value::real),
        tol,
    ));
    out.push(record(
        "encoder-hiding",
        "causalkit manifest",
        Value::real(0.0),
        encoder_hiding_gap().map(Value::real),
        1e-12,
    ));
    out
}

pub fn all_pass(records: &[ReproductionRecord]) -> bool {
    records.iter().all(|r| r.status == Status::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::ProcessMatrix;

    #[test]
    fn seventeen_digits() {
        assert_eq!(sig17(0.5), "0.50000000000000000");
        assert_eq!(sig17(cyril_value()).len(), "0.".len() + 17);
        assert_eq!(sig17(12.5), "12.500000000000000");
        assert_eq!(sig17(f64::EPSILON), "2.2204460492503131e-16");
        assert_eq!(sig17(0.0), "0");
    }

    #[test]
    fn manifest_passes() {
        let recs = run_manifest(crate::TOL);
        assert!(recs.len() >= 12);
        for r in &recs {
            assert_eq!(
                r.status,
                Status::Pass,
                "{} computed {}",
                r.claim_id,
                r.computed.display()
            );
        }
        let json = serde_json::to_string(&recs).unwrap();
        let back: Vec<ReproductionRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, recs);
    }

    #[test]
    fn damaged_cyril_fails_only_dependent_records() {
        let w = build_cyril();
        let mut data = w.op().data().clone();
        data[(0, 0)] *= c(1.1, 0.0);
        let op = LabeledOperator::new(w.op().wires().to_vec(), data).unwrap();
        let fx = Fixtures {
            cyril: ProcessMatrix::new(op, w.parties().to_vec()).unwrap(),
        };
        let recs = run_manifest_with(&fx, crate::TOL);
        let gyni = recs.iter().find(|r| r.claim_id == "gyni-cyril").unwrap();
        assert_eq!(gyni.status, Status::Fail);
        let tdr = recs.iter().find(|r| r.claim_id == "tdr-ebw").unwrap();
        assert_eq!(tdr.status, Status::Pass);
    }
}
