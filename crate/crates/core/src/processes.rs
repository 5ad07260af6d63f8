//! Process matrices and their linear validity constraints.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{
    c, kron, kron_all, max_abs, min_eigenvalue, partial_transpose, permute_wires,
    trace_and_replace, CMatrix, LabeledOperator, WireLabel, ONE, ZERO,
};
use crate::TOL;

/// Pauli matrix `σ^k` for `k = 0..=3` (`σ⁰ = I`).
pub fn pauli(k: usize) -> CMatrix {
    let m = match k {
        0 => [[ONE, ZERO], [ZERO, ONE]],
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("pauli index {k} out of range"),
    };
    CMatrix::from_fn(2, 2, |i, j| m[i][j])
}

/// One laboratory: an input wire, an output wire and any extra input-only
/// wires it receives (shared states, encoded data).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartySlot {
    pub name: String,
    pub input: String,
    pub output: String,
    #[serde(default)]
    pub ancillas: Vec<String>,
}

impl PartySlot {
    pub fn new(name: &str, input: &str, output: &str) -> Self {
        Self {
            name: name.into(),
            input: input.into(),
            output: output.into(),
            ancillas: Vec::new(),
        }
    }

    /// Ancillas followed by the input wire.
    pub fn input_set(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.ancillas.iter().map(String::as_str).collect();
        v.push(&self.input);
        v
    }

    /// Every wire the party touches.
    pub fn all_wires(&self) -> Vec<&str> {
        let mut v = self.input_set();
        v.push(&self.output);
        v
    }
}

/// The standard slots `A = (A_I, A_O)`, `B = (B_I, B_O)`.
pub fn bipartite_slots() -> Vec<PartySlot> {
    vec![
        PartySlot::new("A", "A_I", "A_O"),
        PartySlot::new("B", "B_I", "B_O"),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProcessMatrix {
    op: LabeledOperator,
    parties: Vec<PartySlot>,
}

impl ProcessMatrix {
    /// Checks that the party slots partition the operator's wires. No
    /// numerical validation happens here.
    pub fn new(op: LabeledOperator, parties: Vec<PartySlot>) -> Result<Self> {
        let mut claimed: Vec<&str> = Vec::new();
        for p in &parties {
            if parties.iter().filter(|q| q.name == p.name).count() > 1 {
                return Err(Error::Structure(format!("party `{}` listed twice", p.name)));
            }
            for w in p.all_wires() {
                if !op.has_wire(w) {
                    return Err(Error::UnknownWire(w.to_string()));
                }
                if claimed.contains(&w) {
                    return Err(Error::Structure(format!("wire `{w}` claimed by two slots")));
                }
                claimed.push(w);
            }
        }
        if let Some(w) = op
            .wires()
            .iter()
            .find(|w| !claimed.contains(&w.name.as_str()))
        {
            return Err(Error::Structure(format!(
                "wire `{}` belongs to no party",
                w.name
            )));
        }
        Ok(Self { op, parties })
    }

    /// Process over `[A_I, A_O, B_I, B_O]` with the standard slots.
    pub fn bipartite(op: LabeledOperator) -> Result<Self> {
        let op = permute_wires(&op, &["A_I", "A_O", "B_I", "B_O"])?;
        Self::new(op, bipartite_slots())
    }

    pub fn op(&self) -> &LabeledOperator {
        &self.op
    }

    pub fn parties(&self) -> &[PartySlot] {
        &self.parties
    }

    pub fn party(&self, name: &str) -> Result<&PartySlot> {
        self.parties
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::Structure(format!("no party named `{name}`")))
    }

    fn dim_of(&self, wire: &str) -> usize {
        self.op.wire(wire).map(|w| w.dim).unwrap_or(1)
    }

    /// Product of output dimensions: the trace every valid process has.
    pub fn expected_trace(&self) -> f64 {
        self.parties
            .iter()
            .map(|p| self.dim_of(&p.output) as f64)
            .product()
    }

    /// The `parties:` header line of the dump format.
    pub fn parties_header(&self) -> String {
        let slots: Vec<String> = self
            .parties
            .iter()
            .map(|p| {
                if p.ancillas.is_empty() {
                    format!("{}=({},{})", p.name, p.input, p.output)
                } else {
                    format!(
                        "{}=({},{}|{})",
                        p.name,
                        p.input,
                        p.output,
                        p.ancillas.join(",")
                    )
                }
            })
            .collect();
        format!("parties: {}", slots.join(";"))
    }

    fn two_parties(&self) -> Result<(&PartySlot, &PartySlot)> {
        match self.parties.as_slice() {
            [a, b] => Ok((a, b)),
            _ => Err(Error::Structure(format!(
                "expected two party slots, found {}",
                self.parties.len()
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub psd_ok: bool,
    pub min_eigenvalue: f64,
    pub constraint_residuals: Vec<(String, f64)>,
    pub valid: bool,
}

impl ValidityReport {
    pub fn from_parts(min_eig: f64, residuals: Vec<(String, f64)>, tol: f64) -> Self {
        let psd_ok = min_eig >= -tol;
        let valid = psd_ok && residuals.iter().all(|(_, r)| *r <= tol);
        Self {
            psd_ok,
            min_eigenvalue: min_eig,
            constraint_residuals: residuals,
            valid,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.constraint_residuals
            .iter()
            .fold(0.0f64, |m, (_, r)| m.max(*r))
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.constraint_residuals
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| *r)
    }
}

fn join<'a>(a: &[&'a str], b: &[&'a str]) -> Vec<&'a str> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

fn diff(x: &LabeledOperator, y: &LabeledOperator) -> Result<f64> {
    x.max_abs_diff(y)
}

fn normalization_residuals(w: &ProcessMatrix) -> Result<Vec<(String, f64)>> {
    let (a, b) = w.two_parties()?;
    let op = &w.op;
    let a_in = a.input_set();
    let b_in = b.input_set();
    let (ao, bo) = (a.output.as_str(), b.output.as_str());

    let d_in: usize = a_in.iter().chain(&b_in).map(|n| w.dim_of(n)).product();
    let all = op.wire_names();
    let full = trace_and_replace(op, &all)?;
    let target = LabeledOperator::identity(op.wires().to_vec())?.scale(c(1.0 / d_in as f64, 0.0));
    let r_norm = diff(&full, &target)?;

    let a_set = join(&a_in, &[ao]);
    let r_a = diff(
        &trace_and_replace(op, &a_set)?,
        &trace_and_replace(op, &join(&a_set, &[bo]))?,
    )?;

    let b_set = join(&b_in, &[bo]);
    let r_b = diff(
        &trace_and_replace(op, &b_set)?,
        &trace_and_replace(op, &join(&b_set, &[ao]))?,
    )?;

    let t_a = trace_and_replace(op, &[ao])?;
    let t_b = trace_and_replace(op, &[bo])?;
    let t_ab = trace_and_replace(op, &[ao, bo])?;
    let recombined = t_a.add(&t_b)?.sub(&t_ab)?;
    let r_loop = diff(op, &recombined)?;

    Ok(vec![
        ("normalization".into(), r_norm),
        ("marginal_A".into(), r_a),
        ("marginal_B".into(), r_b),
        ("no_loops".into(), r_loop),
    ])
}

pub fn validate_process(w: &ProcessMatrix) -> Result<ValidityReport> {
    validate_process_with_tol(w, TOL)
}

pub fn validate_process_with_tol(w: &ProcessMatrix, tol: f64) -> Result<ValidityReport> {
    let residuals = normalization_residuals(w)?;
    let lam = min_eigenvalue(&w.op)?;
    Ok(ValidityReport::from_parts(lam, residuals, tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalOrder {
    AbeforeB,
    BbeforeA,
    NoSignaling,
}

impl FromStr for CausalOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A<B" | "a-before-b" | "AB" => Ok(Self::AbeforeB),
            "B<A" | "b-before-a" | "BA" => Ok(Self::BbeforeA),
            "no-signaling" | "nosig" | "ns" => Ok(Self::NoSignaling),
            other => Err(Error::UnknownToken(other.to_string())),
        }
    }
}

impl fmt::Display for CausalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::AbeforeB => "A<B",
            Self::BbeforeA => "B<A",
            Self::NoSignaling => "no-signaling",
        })
    }
}

/// Validity residuals plus the linear constraints of one fixed order.
///
/// Only the named order is tested; a mixture of orders will generally fail
/// each individual check.
pub fn check_order(w: &ProcessMatrix, order: CausalOrder) -> Result<ValidityReport> {
    let (a, b) = w.two_parties()?;
    let op = &w.op;
    let (ao, bo) = (a.output.as_str(), b.output.as_str());
    let mut residuals = normalization_residuals(w)?;
    match order {
        CausalOrder::AbeforeB => {
            residuals.push((
                "order_last_output".into(),
                diff(op, &trace_and_replace(op, &[bo])?)?,
            ));
            let b_set = join(&b.input_set(), &[bo]);
            residuals.push((
                "order_first_output".into(),
                diff(
                    &trace_and_replace(op, &b_set)?,
                    &trace_and_replace(op, &join(&[ao], &b_set))?,
                )?,
            ));
        }
        CausalOrder::BbeforeA => {
            residuals.push((
                "order_last_output".into(),
                diff(op, &trace_and_replace(op, &[ao])?)?,
            ));
            let a_set = join(&a.input_set(), &[ao]);
            residuals.push((
                "order_first_output".into(),
                diff(
                    &trace_and_replace(op, &a_set)?,
                    &trace_and_replace(op, &join(&[bo], &a_set))?,
                )?,
            ));
        }
        CausalOrder::NoSignaling => {
            residuals.push((
                "no_signaling".into(),
                diff(op, &trace_and_replace(op, &[ao, bo])?)?,
            ));
        }
    }
    let lam = min_eigenvalue(op)?;
    Ok(ValidityReport::from_parts(lam, residuals, TOL))
}

/// Partial transpose over every wire of `side`; returns the PSD verdict and
/// the smallest eigenvalue.
pub fn is_ppt_cut(w: &ProcessMatrix, side: &str) -> Result<(bool, f64)> {
    w.two_parties()?;
    let slot = w.party(side)?;
    let pt = partial_transpose(&w.op, &slot.all_wires())?;
    let lam = min_eigenvalue(&pt)?;
    Ok((lam >= -TOL, lam))
}

fn pauli_string(names: &[&str], ks: &[usize]) -> Result<LabeledOperator> {
    let factors: Vec<LabeledOperator> = names
        .iter()
        .zip(ks)
        .map(|(n, &k)| LabeledOperator::new(vec![WireLabel::qubit(*n)], pauli(k)))
        .collect::<Result<_>>()?;
    let refs: Vec<&LabeledOperator> = factors.iter().collect();
    kron_all(&refs)
}

const CYRIL_WIRES: [&str; 4] = ["A_I", "A_O", "B_I", "B_O"];

/// `¼[I⊗I⊗I⊗I + (σ³σ³σ³I + σ³Iσ¹σ¹)/√2]` over `[A_I, A_O, B_I, B_O]`.
pub fn build_cyril() -> ProcessMatrix {
    let id = pauli_string(&CYRIL_WIRES, &[0, 0, 0, 0]).unwrap();
    let zzz = pauli_string(&CYRIL_WIRES, &[3, 3, 3, 0]).unwrap();
    let zixx = pauli_string(&CYRIL_WIRES, &[3, 0, 1, 1]).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let data = (id.data() + (zzz.data() + zixx.data()) * c(s, 0.0)) * c(0.25, 0.0);
    let op = LabeledOperator::new(id.wires().to_vec(), data).unwrap();
    ProcessMatrix::new(op, bipartite_slots()).unwrap()
}

/// Single-qubit projectors used in the separable decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projector {
    Z(bool),
    X(bool),
    /// `½(I ± (σ³+σ¹)/√2)`
    Alpha(bool),
    /// `½(I ± (σ³−σ¹)/√2)`
    Beta(bool),
}

impl Projector {
    pub fn matrix(self) -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (sign, axis) = match self {
            Projector::Z(p) => (p, pauli(3)),
            Projector::X(p) => (p, pauli(1)),
            Projector::Alpha(p) => (p, (pauli(3) + pauli(1)) * c(s, 0.0)),
            Projector::Beta(p) => (p, (pauli(3) - pauli(1)) * c(s, 0.0)),
        };
        let sgn = if sign { 1.0 } else { -1.0 };
        (pauli(0) + axis * c(sgn, 0.0)) * c(0.5, 0.0)
    }
}

/// The eight product terms (each with weight ½) whose sum is the Cyril
/// process, in the order `(A_I, A_O, B_I, B_O)`.
pub fn cyril_separable_terms() -> Vec<[Projector; 4]> {
    use Projector::*;
    let (p, m) = (true, false);
    vec![
        [Z(p), Z(p), Alpha(p), X(p)],
        [Z(m), Z(p), Alpha(m), X(p)],
        [Z(p), Z(p), Beta(p), X(m)],
        [Z(m), Z(p), Beta(m), X(m)],
        [Z(p), Z(m), Beta(m), X(p)],
        [Z(m), Z(m), Beta(p), X(p)],
        [Z(p), Z(m), Alpha(m), X(m)],
        [Z(m), Z(m), Alpha(p), X(m)],
    ]
}

pub fn cyril_term_operator(term: &[Projector; 4]) -> Result<LabeledOperator> {
    let factors: Vec<LabeledOperator> = CYRIL_WIRES
        .iter()
        .zip(term)
        .map(|(n, p)| LabeledOperator::new(vec![WireLabel::qubit(*n)], p.matrix()))
        .collect::<Result<_>>()?;
    let refs: Vec<&LabeledOperator> = factors.iter().collect();
    Ok(kron_all(&refs)?.scale(c(0.5, 0.0)))
}

/// Max entrywise distance between the eight-term sum and the Cyril process.
pub fn verify_cyril_separable_decomposition() -> f64 {
    let w = build_cyril();
    let mut sum = CMatrix::zeros(16, 16);
    for t in cyril_separable_terms() {
        sum += cyril_term_operator(&t).unwrap().data();
    }
    max_abs(&(sum - w.op.data()))
}

/// Checks unit trace, Hermiticity and positivity.
pub fn check_state(rho: &LabeledOperator) -> Result<()> {
    let tr = rho.trace();
    if (tr - ONE).norm() > TOL {
        return Err(Error::NotAState(format!("trace is {tr}")));
    }
    let lam = min_eigenvalue(rho).map_err(|e| Error::NotAState(e.to_string()))?;
    if lam < -TOL {
        return Err(Error::NotAState(format!("min eigenvalue {lam:e}")));
    }
    Ok(())
}

/// `W ⊗ rho`, registering each wire of `rho` as an input-only ancilla of the
/// party named in `owners` (one entry per wire of `rho`, in order).
pub fn extend_with_state(
    w: &ProcessMatrix,
    rho: &LabeledOperator,
    owners: &[&str],
) -> Result<ProcessMatrix> {
    if owners.len() != rho.wires().len() {
        return Err(Error::Structure(format!(
            "{} owners given for {} state wires",
            owners.len(),
            rho.wires().len()
        )));
    }
    check_state(rho)?;
    let op = kron(&w.op, rho)?;
    let mut parties = w.parties.clone();
    for (wire, owner) in rho.wires().iter().zip(owners) {
        let slot = parties
            .iter_mut()
            .find(|p| p.name == *owner)
            .ok_or_else(|| Error::Structure(format!("no party named `{owner}`")))?;
        slot.ancillas.push(wire.name.clone());
    }
    ProcessMatrix::new(op, parties)
}

/// `I/(d_{A_I} d_{B_I})` with every wire of dimension `d`.
pub fn maximally_mixed_process(d: usize) -> Result<ProcessMatrix> {
    let ws = crate::tensor::wires(&CYRIL_WIRES, d);
    let id = LabeledOperator::identity(ws)?;
    ProcessMatrix::new(id.scale(c(1.0 / (d * d) as f64, 0.0)), bipartite_slots())
}

/// `rho_{A_I B_I} ⊗ I_{A_O B_O}`: a shared state and no communication.
pub fn no_signaling_process(rho: &LabeledOperator, d_out: usize) -> Result<ProcessMatrix> {
    check_state(rho)?;
    let rho = permute_wires(rho, &["A_I", "B_I"])?;
    let id = LabeledOperator::identity(vec![
        WireLabel::new("A_O", d_out),
        WireLabel::new("B_O", d_out),
    ])?;
    ProcessMatrix::bipartite(kron(&rho, &id)?)
}

/// `rho_{A_I} ⊗ C_{A_O B_I} ⊗ I_{B_O}`: Alice's output reaches Bob through
/// the channel with Choi operator `channel` (wires `A_O`, `B_I`).
pub fn channel_process_a_before_b(
    rho: &LabeledOperator,
    channel: &LabeledOperator,
    d_bo: usize,
) -> Result<ProcessMatrix> {
    check_state(rho)?;
    let id = LabeledOperator::identity(vec![WireLabel::new("B_O", d_bo)])?;
    let op = kron_all(&[rho, channel, &id])?;
    ProcessMatrix::bipartite(op)
}

/// Mirror image of [`channel_process_a_before_b`]; `channel` lives on
/// `B_O`, `A_I`.
pub fn channel_process_b_before_a(
    rho: &LabeledOperator,
    channel: &LabeledOperator,
    d_ao: usize,
) -> Result<ProcessMatrix> {
    check_state(rho)?;
    let id = LabeledOperator::identity(vec![WireLabel::new("A_O", d_ao)])?;
    let op = kron_all(&[rho, channel, &id])?;
    ProcessMatrix::bipartite(op)
}

/// Weighted sum of processes sharing the same wires and slots.
pub fn mixture(parts: &[(f64, &ProcessMatrix)]) -> Result<ProcessMatrix> {
    let (_, first) = parts
        .first()
        .ok_or_else(|| Error::Structure("empty mixture".into()))?;
    let mut acc = first.op.scale(c(0.0, 0.0));
    for (p, w) in parts {
        if w.parties != first.parties {
            return Err(Error::Structure(
                "mixture of processes with different slots".into(),
            ));
        }
        acc = acc.add(&w.op.scale(c(*p, 0.0)))?;
    }
    ProcessMatrix::new(acc, first.parties.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{partial_trace, wires};

    fn phi_plus(a: &str, b: &str, d: usize) -> LabeledOperator {
        let mut v = vec![ZERO; d * d];
        for k in 0..d {
            v[k * d + k] = c(1.0 / (d as f64).sqrt(), 0.0);
        }
        LabeledOperator::from_ket(vec![WireLabel::new(a, d), WireLabel::new(b, d)], &v).unwrap()
    }

    fn identity_channel(a: &str, b: &str) -> LabeledOperator {
        phi_plus(a, b, 2).scale(c(2.0, 0.0))
    }

    #[test]
    fn cyril_is_valid_with_trace_four() {
        let w = build_cyril();
        assert!((w.op().trace().re - 4.0).abs() < 1e-12);
        assert!(w.op().is_hermitian());
        let r = validate_process(&w).unwrap();
        assert!(r.valid, "{r:?}");
        assert_eq!(r.constraint_residuals.len(), 4);
        assert!(r.min_eigenvalue >= 0.0 - 1e-12);
    }

    #[test]
    fn cyril_entries_match_pauli_expansion() {
        // Independent expansion: each Pauli string is a signed permutation,
        // so sum the contributions entry by entry.
        let w = build_cyril();
        let sign_z = |b: usize| if b == 0 { 1.0 } else { -1.0 };
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for r in 0..16usize {
            for col in 0..16usize {
                let bits = |x: usize| [(x >> 3) & 1, (x >> 2) & 1, (x >> 1) & 1, x & 1];
                let (rb, cb) = (bits(r), bits(col));
                let mut v = if r == col { 1.0 } else { 0.0 };
                if r == col {
                    v += s * sign_z(rb[0]) * sign_z(rb[1]) * sign_z(rb[2]);
                }
                if rb[0] == cb[0] && rb[1] == cb[1] && rb[2] != cb[2] && rb[3] != cb[3] {
                    v += s * sign_z(rb[0]);
                }
                v *= 0.25;
                assert!((w.op().data()[(r, col)].re - v).abs() < 1e-15);
                assert_eq!(w.op().data()[(r, col)].im, 0.0);
            }
        }
        let top = w.op().data()[(0, 0)].re;
        assert!((top - (1.0 + s) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn maximally_mixed_is_valid_and_ppt() {
        let w = maximally_mixed_process(2).unwrap();
        assert!(validate_process(&w).unwrap().valid);
        let (ppt, lam) = is_ppt_cut(&w, "B").unwrap();
        assert!(ppt);
        assert!((lam - 0.25).abs() < 1e-12);
    }

    #[test]
    fn entangled_outputs_break_validity() {
        let op = kron(&phi_plus("A_I", "B_I", 2), &phi_plus("A_O", "B_O", 2)).unwrap();
        let w = ProcessMatrix::bipartite(op).unwrap();
        let r = validate_process(&w).unwrap();
        assert!(!r.valid);
        assert!(r.residual("no_loops").unwrap() > 0.1);
    }

    #[test]
    fn structural_errors() {
        let op = LabeledOperator::identity(wires(&["A_I", "A_O", "B_I"], 2)).unwrap();
        assert!(ProcessMatrix::new(op.clone(), bipartite_slots()).is_err());
        let w = ProcessMatrix::new(
            op,
            vec![PartySlot::new("A", "A_I", "A_O"), {
                let mut s = PartySlot::new("B", "B_I", "B_I");
                s.output = "B_I".into();
                s
            }],
        );
        assert!(w.is_err());
        assert!(matches!(
            "sideways".parse::<CausalOrder>(),
            Err(Error::UnknownToken(_))
        ));
    }

    #[test]
    fn no_signaling_state_process() {
        let w = no_signaling_process(&phi_plus("A_I", "B_I", 2), 2).unwrap();
        let r = check_order(&w, CausalOrder::NoSignaling).unwrap();
        assert!(r.valid, "{r:?}");
        let (ppt, lam) = is_ppt_cut(&w, "B").unwrap();
        assert!(!ppt);
        assert!(lam < 0.0);
    }

    #[test]
    fn channel_process_order_checks() {
        let rho = LabeledOperator::maximally_mixed(vec![WireLabel::qubit("A_I")]).unwrap();
        let w = channel_process_a_before_b(&rho, &identity_channel("A_O", "B_I"), 2).unwrap();
        assert!(validate_process(&w).unwrap().valid);
        assert!(check_order(&w, CausalOrder::AbeforeB).unwrap().valid);
        assert!(!check_order(&w, CausalOrder::BbeforeA).unwrap().valid);
        assert!(!check_order(&w, CausalOrder::NoSignaling).unwrap().valid);

        let rho_b = LabeledOperator::maximally_mixed(vec![WireLabel::qubit("B_I")]).unwrap();
        let w = channel_process_b_before_a(&rho_b, &identity_channel("B_O", "A_I"), 2).unwrap();
        assert!(check_order(&w, CausalOrder::BbeforeA).unwrap().valid);
        assert!(!check_order(&w, CausalOrder::AbeforeB).unwrap().valid);
    }

    #[test]
    fn cyril_fits_no_single_order() {
        let w = build_cyril();
        for o in [
            CausalOrder::AbeforeB,
            CausalOrder::BbeforeA,
            CausalOrder::NoSignaling,
        ] {
            assert!(!check_order(&w, o).unwrap().valid, "{o}");
        }
    }

    #[test]
    fn cyril_ppt_both_sides() {
        let w = build_cyril();
        assert!(is_ppt_cut(&w, "B").unwrap().0);
        assert!(is_ppt_cut(&w, "A").unwrap().0);
    }

    #[test]
    fn separable_decomposition() {
        assert!(verify_cyril_separable_decomposition() <= 1e-12);
        for t in cyril_separable_terms() {
            let op = cyril_term_operator(&t).unwrap();
            assert!(min_eigenvalue(&op).unwrap() >= -1e-12);
            assert!((op.trace().re - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn extension_with_state() {
        let w = build_cyril();
        let ext = extend_with_state(&w, &phi_plus("A", "B", 2), &["A", "B"]).unwrap();
        assert!((ext.op().trace().re - 4.0).abs() < 1e-12);
        assert!(min_eigenvalue(ext.op()).unwrap() >= -TOL);
        assert_eq!(ext.party("A").unwrap().ancillas, vec!["A".to_string()]);
        assert!(validate_process(&ext).unwrap().valid);
        assert_eq!(ext.parties_header(), "parties: A=(A_I,A_O|A);B=(B_I,B_O|B)");

        let bad = phi_plus("A", "B", 2).scale(c(2.0, 0.0));
        assert!(matches!(
            extend_with_state(&w, &bad, &["A", "B"]),
            Err(Error::NotAState(_))
        ));
    }

    #[test]
    fn extension_keeps_no_signaling() {
        let w = no_signaling_process(&phi_plus("A_I", "B_I", 2), 2).unwrap();
        let sigma = LabeledOperator::diagonal(vec![WireLabel::qubit("S")], &[0.3, 0.7]).unwrap();
        let ext = extend_with_state(&w, &sigma, &["B"]).unwrap();
        assert!(check_order(&ext, CausalOrder::NoSignaling).unwrap().valid);
        let back = partial_trace(ext.op(), &["S"]).unwrap();
        assert!(back.max_abs_diff(w.op()).unwrap() < 1e-12);
    }
}
