//! Maps between GYNI strategies and DR strategies that keep the success
//! probability unchanged.
//!
//! DR → GYNI: the parties share an extra `B^{00}` on the former code wires.
//! Alice applies `Z^{i1}` and Bob `X^{i2}` to it, which turns it into the
//! code word `(i2, i1)`, and then they run the DR instruments unchanged.
//!
//! GYNI → DR: each party holds its share of the code word plus a share of
//! an auxiliary `B^{00}`, entangles the two with a local unitary, measures
//! both in the computational basis and uses one digit as the GYNI input and
//! the other to shift the GYNI answer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{
    bell_state_on, eval_dr, eval_gyni, inv_sqrt, omega_pow, BellCode, Encoder, Encoding, Game,
    GameStrategy, SharedState,
};
use crate::instruments::{conjugate_instrument, extend_instrument_with_measurement, Instrument};
use crate::tensor::{c, conjugate_on, kron, CMatrix, WireLabel, ZERO};
use crate::TOL;

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension {
            name: "d".into(),
            dim: d,
        })
    } else {
        Ok(())
    }
}

/// `X|k⟩ = |k ⊕ 1⟩`.
pub fn pauli_xd(d: usize) -> Result<CMatrix> {
    check_d(d)?;
    Ok(CMatrix::from_fn(d, d, |r, col| {
        if r == (col + 1) % d {
            c(1.0, 0.0)
        } else {
            ZERO
        }
    }))
}

/// `Z|k⟩ = ω^k |k⟩`.
pub fn pauli_zd(d: usize) -> Result<CMatrix> {
    check_d(d)?;
    Ok(CMatrix::from_fn(d, d, |r, col| {
        if r == col {
            omega_pow(d, r)
        } else {
            ZERO
        }
    }))
}

/// `F|k⟩ = (1/√d) Σ_q ω^{qk} |q⟩`.
pub fn fourier(d: usize) -> Result<CMatrix> {
    check_d(d)?;
    let norm = inv_sqrt(d);
    Ok(CMatrix::from_fn(d, d, |r, col| {
        omega_pow(d, r * col) * norm
    }))
}

/// `CS|m⟩|n⟩ = |m⟩|n ⊕ m⟩`, control first.
pub fn controlled_shift(d: usize) -> Result<CMatrix> {
    check_d(d)?;
    let n = d * d;
    let mut u = CMatrix::zeros(n, n);
    for m in 0..d {
        for k in 0..d {
            u[(m * d + (k + m) % d, m * d + k)] = c(1.0, 0.0);
        }
    }
    Ok(u)
}

/// `N|n⟩ = |−n⟩`.
pub fn negation(d: usize) -> Result<CMatrix> {
    check_d(d)?;
    Ok(CMatrix::from_fn(d, d, |r, col| {
        if r == (d - col) % d {
            c(1.0, 0.0)
        } else {
            ZERO
        }
    }))
}

/// The two-qubit entangler on `(A, A′)`, written out entry by entry.
pub fn two_qubit_unitary() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let rows = [
        [1.0, 0.0, 0.0, 1.0],
        [0.0, 1.0, 1.0, 0.0],
        [1.0, 0.0, 0.0, -1.0],
        [0.0, 1.0, -1.0, 0.0],
    ];
    CMatrix::from_fn(4, 4, |r, col| c(rows[r][col] * s, 0.0))
}

/// Alice's entangler on (code wire, auxiliary wire):
/// `(F^dag ⊗ N) · CS`. At `d = 2` this is [`two_qubit_unitary`].
pub fn alice_entangler_general(d: usize) -> Result<CMatrix> {
    let local = fourier(d)?.adjoint().kronecker(&negation(d)?);
    Ok(local * controlled_shift(d)?)
}

/// Bob's entangler on (code wire, auxiliary wire): `(F^dag ⊗ I) · CS`.
pub fn bob_entangler_general(d: usize) -> Result<CMatrix> {
    let local = fourier(d)?.adjoint().kronecker(&CMatrix::identity(d, d));
    Ok(local * controlled_shift(d)?)
}

fn alice_entangler(d: usize) -> Result<CMatrix> {
    if d == 2 {
        Ok(two_qubit_unitary())
    } else {
        alice_entangler_general(d)
    }
}

fn bob_entangler(d: usize) -> Result<CMatrix> {
    if d == 2 {
        Ok(two_qubit_unitary())
    } else {
        bob_entangler_general(d)
    }
}

/// Smallest probability, over all code words, that after both entanglers
/// the computational outcomes satisfy `u ⊕ v = x2` and `u′ ⊕ v′ = x1`.
pub fn xor_precheck(d: usize) -> Result<f64> {
    let (va, vb) = (alice_entangler(d)?, bob_entangler(d)?);
    let mut worst = 1.0f64;
    for code in BellCode::all(d) {
        let rho = kron(
            &bell_state_on(code, "A", "B"),
            &bell_state_on(BellCode { d, x1: 0, x2: 0 }, "A'", "B'"),
        )?;
        let rho = conjugate_on(&rho, &va, &["A", "A'"])?;
        let rho = conjugate_on(&rho, &vb, &["B", "B'"])?;
        // wire order A, B, A', B'
        let mut p = 0.0;
        for idx in 0..d.pow(4) {
            let (u, v, up, vp) = (idx / d.pow(3), (idx / d.pow(2)) % d, (idx / d) % d, idx % d);
            if (u + v) % d == code.x2 && (up + vp) % d == code.x1 {
                p += rho.data()[(idx, idx)].re;
            }
        }
        worst = worst.min(p);
    }
    Ok(worst)
}

fn fresh(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

fn all_wire_names(s: &GameStrategy) -> Vec<String> {
    let mut names: Vec<String> = s
        .process
        .op()
        .wire_names()
        .iter()
        .map(|n| n.to_string())
        .collect();
    for r in &s.resources {
        names.extend(r.state.wire_names().iter().map(|n| n.to_string()));
    }
    if let Some(e) = &s.encoding {
        names.push(e.alice_wire.clone());
        names.push(e.bob_wire.clone());
    }
    names
}

fn party_names(s: &GameStrategy) -> Result<(String, String)> {
    match s.process.parties() {
        [a, b] => Ok((a.name.clone(), b.name.clone())),
        _ => Err(Error::Structure("expected two parties".into())),
    }
}

/// GYNI strategy on `W ⊗ B^{00}` (the extra state sitting on the former code
/// wires). Alice's GYNI input `i1` conjugates her DR instrument by
/// `Z^{−i1}` on her code wire; Bob's input `i2` conjugates by `X^{−i2}`.
pub fn dr_to_gyni(s: &GameStrategy) -> Result<GameStrategy> {
    let d = match s.game {
        Game::Dr { d } => d,
        _ => return Err(Error::Structure("dr_to_gyni needs a DR strategy".into())),
    };
    let enc = s
        .encoding
        .as_ref()
        .ok_or_else(|| Error::Structure("DR strategy without encoding".into()))?;
    let (an, bn) = party_names(s)?;
    let (z, x) = (pauli_zd(d)?, pauli_xd(d)?);
    let mut alice = Vec::with_capacity(d);
    let mut bob = Vec::with_capacity(d);
    let (mut zp, mut xp) = (CMatrix::identity(d, d), CMatrix::identity(d, d));
    for _ in 0..d {
        alice.push(conjugate_instrument(
            &s.alice[0],
            &zp.adjoint(),
            &enc.alice_wire,
        )?);
        bob.push(conjugate_instrument(
            &s.bob[0],
            &xp.adjoint(),
            &enc.bob_wire,
        )?);
        zp = &z * zp;
        xp = &x * xp;
    }
    let mut resources = s.resources.clone();
    resources.push(SharedState {
        state: bell_state_on(BellCode { d, x1: 0, x2: 0 }, &enc.alice_wire, &enc.bob_wire),
        owners: vec![an, bn],
    });
    GameStrategy::gyni(s.process.clone(), resources, alice, bob, d)
}

/// DR strategy on `W ⊗ B^{00}_{A′B′}` built from a GYNI strategy through
/// [`extend_instrument_with_measurement`].
pub fn gyni_to_dr(s: &GameStrategy) -> Result<GameStrategy> {
    let d = match s.game {
        Game::Gyni { d } => d,
        _ => return Err(Error::Structure("gyni_to_dr needs a GYNI strategy".into())),
    };
    let (an, bn) = party_names(s)?;
    let mut taken = all_wire_names(s);
    let code_a = fresh("A", &taken);
    taken.push(code_a.clone());
    let code_b = fresh("B", &taken);
    taken.push(code_b.clone());
    let aux_a = fresh(&format!("{code_a}'"), &taken);
    taken.push(aux_a.clone());
    let aux_b = fresh(&format!("{code_b}'"), &taken);

    let wl = |n: &str| WireLabel::new(n, d);
    // Alice: u from the code wire selects the inner input, u′ shifts the answer.
    let alice = extend_instrument_with_measurement(
        &s.alice,
        &[wl(&code_a), wl(&aux_a)],
        &alice_entangler(d)?,
        |m| m[0],
        move |m, k| (k + m[1]) % d,
        d,
    )?;
    // Bob: v′ from the auxiliary wire selects the inner input, v shifts.
    let bob = extend_instrument_with_measurement(
        &s.bob,
        &[wl(&code_b), wl(&aux_b)],
        &bob_entangler(d)?,
        |m| m[1],
        move |m, k| (k + m[0]) % d,
        d,
    )?;
    let mut resources = s.resources.clone();
    resources.push(SharedState {
        state: bell_state_on(BellCode { d, x1: 0, x2: 0 }, &aux_a, &aux_b),
        owners: vec![an, bn],
    });
    let encoding = Encoding {
        alice_wire: code_a,
        bob_wire: code_b,
        encoder: Encoder::Bell,
    };
    GameStrategy::dr(s.process.clone(), resources, alice, bob, encoding, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "gyni->dr")]
    GyniToDr,
    #[serde(rename = "dr->gyni")]
    DrToGyni,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gyni2dr" | "gyni->dr" => Ok(Self::GyniToDr),
            "dr2gyni" | "dr->gyni" => Ok(Self::DrToGyni),
            other => Err(Error::UnknownToken(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityCertificate {
    pub source_value: f64,
    pub target_value: f64,
    pub direction: Direction,
    pub d: usize,
}

impl DualityCertificate {
    pub fn gap(&self) -> f64 {
        (self.source_value - self.target_value).abs()
    }
}

fn value(s: &GameStrategy) -> Result<f64> {
    Ok(match s.game {
        Game::Gyni { .. } => eval_gyni(s)?.value,
        Game::Dr { .. } => eval_dr(s)?.value,
    })
}

/// Transforms `s`, evaluates both sides, and fails with
/// [`Error::DualityViolation`] if the values differ by more than `tol`.
pub fn check_duality_with_tol(
    s: &GameStrategy,
    direction: Direction,
    tol: f64,
) -> Result<DualityCertificate> {
    let target = match direction {
        Direction::GyniToDr => gyni_to_dr(s)?,
        Direction::DrToGyni => dr_to_gyni(s)?,
    };
    let cert = DualityCertificate {
        source_value: value(s)?,
        target_value: value(&target)?,
        direction,
        d: s.d(),
    };
    if cert.gap() > tol {
        return Err(Error::DualityViolation {
            source_value: cert.source_value,
            target_value: cert.target_value,
        });
    }
    Ok(cert)
}

pub fn check_duality(s: &GameStrategy, direction: Direction) -> Result<DualityCertificate> {
    check_duality_with_tol(s, direction, TOL)
}

/// Every outcome operator in the composite instruments produced by
/// [`gyni_to_dr`], for validity checks.
pub fn target_instruments(s: &GameStrategy) -> Vec<&Instrument> {
    s.alice.iter().chain(&s.bob).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{
        constant_guess_strategy, cyril_gyni_strategy, cyril_value, pauli_y_baseline_strategy,
    };
    use crate::instruments::validate_instrument;
    use crate::tensor::max_abs;

    #[test]
    fn small_unitaries() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = CMatrix::from_fn(2, 2, |r, col| {
            c(if r == 1 && col == 1 { -s } else { s }, 0.0)
        });
        assert_eq!(fourier(2).unwrap(), h);
        let cnot = CMatrix::from_fn(4, 4, |r, col| {
            let perm = [0, 1, 3, 2];
            if perm[col] == r {
                c(1.0, 0.0)
            } else {
                ZERO
            }
        });
        assert_eq!(controlled_shift(2).unwrap(), cnot);
        assert_eq!(pauli_xd(2).unwrap(), crate::processes::pauli(1));
        assert_eq!(pauli_zd(2).unwrap(), crate::processes::pauli(3));
        assert!(fourier(1).is_err());
        assert!(controlled_shift(0).is_err());
    }

    #[test]
    fn qutrit_weyl_relation() {
        let (z, x) = (pauli_zd(3).unwrap(), pauli_xd(3).unwrap());
        let lhs = &z * &x;
        let rhs = &x * &z * omega_pow(3, 1);
        assert!(max_abs(&(lhs - rhs)) < 1e-12);
    }

    #[test]
    fn general_entanglers_reduce_to_the_qubit_matrix() {
        let u = two_qubit_unitary();
        assert!(max_abs(&(alice_entangler_general(2).unwrap() - &u)) < 1e-12);
        assert!(max_abs(&(bob_entangler_general(2).unwrap() - &u)) < 1e-12);
    }

    #[test]
    fn precheck_qubits_and_qutrits() {
        for d in [2, 3] {
            assert!((xor_precheck(d).unwrap() - 1.0).abs() < 1e-9, "d={d}");
        }
    }

    #[test]
    fn cyril_to_dr() {
        let dr = gyni_to_dr(&cyril_gyni_strategy()).unwrap();
        assert!((eval_dr(&dr).unwrap().value - cyril_value()).abs() < 1e-12);
        for ins in target_instruments(&dr) {
            assert!(validate_instrument(ins).unwrap().valid);
        }
        let enc = dr.encoding.as_ref().unwrap();
        assert_eq!((enc.alice_wire.as_str(), enc.bob_wire.as_str()), ("A", "B"));
    }

    #[test]
    fn pauli_y_to_gyni() {
        let c = check_duality(&pauli_y_baseline_strategy(), Direction::DrToGyni).unwrap();
        assert!((c.source_value - 0.5).abs() < 1e-12);
        assert!(c.gap() < 1e-12);
    }

    #[test]
    fn constant_strategies_both_ways() {
        for g in [Game::Gyni { d: 2 }, Game::Dr { d: 2 }] {
            let s = constant_guess_strategy(g).unwrap();
            let dir = if matches!(g, Game::Gyni { .. }) {
                Direction::GyniToDr
            } else {
                Direction::DrToGyni
            };
            let c = check_duality(&s, dir).unwrap();
            assert!((c.target_value - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn round_trip_uses_fresh_wires() {
        let g = dr_to_gyni(&pauli_y_baseline_strategy()).unwrap();
        let dr = gyni_to_dr(&g).unwrap();
        let enc = dr.encoding.as_ref().unwrap();
        assert_eq!(enc.alice_wire, "A'");
        assert!((eval_dr(&dr).unwrap().value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn wrong_direction_is_an_error() {
        assert!(dr_to_gyni(&cyril_gyni_strategy()).is_err());
        assert!(gyni_to_dr(&pauli_y_baseline_strategy()).is_err());
        assert!(matches!(
            "sideways".parse::<Direction>(),
            Err(Error::UnknownToken(_))
        ));
    }
}
