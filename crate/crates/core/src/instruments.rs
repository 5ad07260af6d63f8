//! Quantum instruments in Choi form.
//!
//! Each outcome operator lives on `input_wires ++ output_wires`. The sum of
//! all outcomes must be the Choi operator of a trace-preserving map, which
//! here means its partial trace over the outputs is the identity on the
//! inputs. An instrument without output wires is a POVM.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::processes::ValidityReport;
use crate::tensor::{
    c, conjugate_on, kron, max_abs, min_eigenvalue, partial_trace, unitarity_deviation, CMatrix,
    LabeledOperator, WireLabel, ZERO,
};
use crate::TOL;

#[derive(Clone, Debug, PartialEq)]
pub struct Instrument {
    pub input_wires: Vec<WireLabel>,
    pub output_wires: Vec<WireLabel>,
    pub outcomes: Vec<LabeledOperator>,
}

impl Instrument {
    /// Reorders every outcome onto `inputs ++ outputs` and checks shapes.
    pub fn new(
        input_wires: Vec<WireLabel>,
        output_wires: Vec<WireLabel>,
        outcomes: Vec<LabeledOperator>,
    ) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::EmptyInstrument);
        }
        let all: Vec<WireLabel> = input_wires.iter().chain(&output_wires).cloned().collect();
        let names: Vec<&str> = all.iter().map(|w| w.name.as_str()).collect();
        let reference = LabeledOperator::identity(all.clone())?;
        let outcomes = outcomes
            .iter()
            .map(|m| reference.align(m))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| {
                Error::InvalidInstrument(format!("outcome wires must be {names:?}: {e}"))
            })?;
        Ok(Self {
            input_wires,
            output_wires,
            outcomes,
        })
    }

    pub fn wires(&self) -> Vec<WireLabel> {
        self.input_wires
            .iter()
            .chain(&self.output_wires)
            .cloned()
            .collect()
    }

    pub fn wire_names(&self) -> Vec<String> {
        self.wires().into_iter().map(|w| w.name).collect()
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcome(&self, k: usize) -> Result<&LabeledOperator> {
        self.outcomes.get(k).ok_or(Error::OutOfRange {
            index: k,
            bound: self.outcomes.len(),
        })
    }

    /// Sum of all outcome operators.
    pub fn total(&self) -> LabeledOperator {
        let mut acc = self.outcomes[0].clone();
        for m in &self.outcomes[1..] {
            acc = acc.add(m).expect("outcomes share wires");
        }
        acc
    }

    /// `max |Tr_out(Σ_k M^k) − I_in|`.
    pub fn cptp_residual(&self) -> Result<f64> {
        let total = self.total();
        let outs: Vec<&str> = self.output_wires.iter().map(|w| w.name.as_str()).collect();
        let marginal = partial_trace(&total, &outs)?;
        let d_in = marginal.dim();
        Ok(max_abs(&(marginal.data() - CMatrix::identity(d_in, d_in))))
    }

    /// The `instrument:` header line of the dump format.
    pub fn header(&self) -> String {
        let fmt = |ws: &[WireLabel]| {
            ws.iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "instrument: inputs={} outputs={}",
            fmt(&self.input_wires),
            fmt(&self.output_wires)
        )
    }
}

pub fn validate_instrument(ins: &Instrument) -> Result<ValidityReport> {
    if ins.outcomes.is_empty() {
        return Err(Error::EmptyInstrument);
    }
    let mut lam = f64::INFINITY;
    for m in &ins.outcomes {
        lam = lam.min(min_eigenvalue(m)?);
    }
    let residuals = vec![("cptp".to_string(), ins.cptp_residual()?)];
    Ok(ValidityReport::from_parts(lam, residuals, TOL))
}

fn require_valid(ins: &Instrument) -> Result<()> {
    let r = validate_instrument(ins)?;
    if r.valid {
        Ok(())
    } else {
        Err(Error::InvalidInstrument(format!(
            "min eigenvalue {:e}, cptp residual {:e}",
            r.min_eigenvalue,
            r.max_residual()
        )))
    }
}

/// `(I ⊗ U)|φ̃⁺⟩⟨φ̃⁺|(I ⊗ U)^dag` with `|φ̃⁺⟩ = Σ_i |i⟩|i⟩`.
pub fn choi_of_unitary(
    u: &CMatrix,
    input: WireLabel,
    output: WireLabel,
) -> Result<LabeledOperator> {
    let dev = unitarity_deviation(u);
    if dev > TOL {
        return Err(Error::NotUnitary(dev));
    }
    let (di, dout) = (input.dim, output.dim);
    if u.nrows() != dout || u.ncols() != di {
        return Err(Error::DimensionMismatch {
            expected: di,
            actual: u.nrows(),
        });
    }
    let mut v = vec![ZERO; di * dout];
    for i in 0..di {
        for j in 0..dout {
            v[i * dout + j] = u[(j, i)];
        }
    }
    LabeledOperator::from_ket(vec![input, output], &v)
}

fn orthonormality_deviation(vs: &[Vec<Complex64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ip - c(target, 0.0)).norm());
        }
    }
    worst
}

fn projector(wire: &WireLabel, v: &[Complex64]) -> Result<LabeledOperator> {
    if v.len() != wire.dim {
        return Err(Error::DimensionMismatch {
            expected: wire.dim,
            actual: v.len(),
        });
    }
    LabeledOperator::from_ket(vec![wire.clone()], v)
}

/// Measure in `basis`, then prepare `preparations[k]` on outcome `k`:
/// `M^k = |b_k⟩⟨b_k| ⊗ |p_k⟩⟨p_k|`.
pub fn measure_prepare_instrument(
    input: WireLabel,
    output: WireLabel,
    basis: &[Vec<Complex64>],
    preparations: &[Vec<Complex64>],
) -> Result<Instrument> {
    if basis.len() != preparations.len() {
        return Err(Error::InvalidInstrument(format!(
            "{} basis vectors but {} preparations",
            basis.len(),
            preparations.len()
        )));
    }
    if basis.len() != input.dim {
        return Err(Error::NotOrthonormal(f64::INFINITY));
    }
    let dev = orthonormality_deviation(basis);
    if dev > TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    let outcomes = basis
        .iter()
        .zip(preparations)
        .map(|(b, p)| kron(&projector(&input, b)?, &projector(&output, p)?))
        .collect::<Result<Vec<_>>>()?;
    Instrument::new(vec![input], vec![output], outcomes)
}

/// Projective measurement with no output wire.
pub fn povm_instrument(wire: WireLabel, basis: &[Vec<Complex64>]) -> Result<Instrument> {
    let dev = orthonormality_deviation(basis);
    if dev > TOL || basis.len() != wire.dim {
        return Err(Error::NotOrthonormal(dev));
    }
    let outcomes = basis
        .iter()
        .map(|b| projector(&wire, b))
        .collect::<Result<Vec<_>>>()?;
    Instrument::new(vec![wire], Vec::new(), outcomes)
}

/// Standard basis vector `|k⟩` in dimension `d`.
pub fn basis_vector(d: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; d];
    v[k] = c(1.0, 0.0);
    v
}

pub fn computational_basis(d: usize) -> Vec<Vec<Complex64>> {
    (0..d).map(|k| basis_vector(d, k)).collect()
}

/// Single-outcome instrument that discards its input and prepares `psi`.
pub fn discard_and_prepare(
    input: WireLabel,
    output: WireLabel,
    psi: &[Complex64],
) -> Result<Instrument> {
    let id = LabeledOperator::identity(vec![input.clone()])?;
    let op = kron(&id, &projector(&output, psi)?)?;
    Instrument::new(vec![input], vec![output], vec![op])
}

/// Conjugates every outcome by `u` acting on `wire`.
pub fn conjugate_instrument(ins: &Instrument, u: &CMatrix, wire: &str) -> Result<Instrument> {
    let dev = unitarity_deviation(u);
    if dev > TOL {
        return Err(Error::NotUnitary(dev));
    }
    let outcomes = ins
        .outcomes
        .iter()
        .map(|m| conjugate_on(m, u, &[wire]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Instrument {
        input_wires: ins.input_wires.clone(),
        output_wires: ins.output_wires.clone(),
        outcomes,
    })
}

/// Builds a composite instrument that first applies `unitary` to
/// `state_wires`, measures them in the computational basis with result
/// digits `m`, runs `family[select(m)]` with inner outcome `k`, and reports
/// `postprocess(m, k)`. Branches with the same final outcome are summed.
///
/// The composite lives on `state_wires ++ inner inputs` → `inner outputs`.
pub fn extend_instrument_with_measurement(
    family: &[Instrument],
    state_wires: &[WireLabel],
    unitary: &CMatrix,
    select: impl Fn(&[usize]) -> usize,
    postprocess: impl Fn(&[usize], usize) -> usize,
    n_outcomes: usize,
) -> Result<Instrument> {
    let first = family.first().ok_or(Error::EmptyInstrument)?;
    for ins in family {
        require_valid(ins)?;
        if ins.wires() != first.wires() {
            return Err(Error::InvalidInstrument(
                "family members act on different wires".into(),
            ));
        }
    }
    let dev = unitarity_deviation(unitary);
    if dev > TOL {
        return Err(Error::NotUnitary(dev));
    }
    let dims: Vec<usize> = state_wires.iter().map(|w| w.dim).collect();
    let n_states: usize = dims.iter().product();
    if unitary.nrows() != n_states {
        return Err(Error::DimensionMismatch {
            expected: n_states,
            actual: unitary.nrows(),
        });
    }

    let inner_side = first.outcomes[0].dim();
    let mut acc: Vec<CMatrix> =
        vec![CMatrix::zeros(n_states * inner_side, n_states * inner_side); n_outcomes];
    for idx in 0..n_states {
        let mut digits = vec![0usize; dims.len()];
        let mut rem = idx;
        for k in (0..dims.len()).rev() {
            digits[k] = rem % dims[k];
            rem /= dims[k];
        }
        // effect U^dag |m><m| U
        let row = unitary.row(idx);
        let effect = row.adjoint() * row;
        let s = select(&digits);
        let inner = family.get(s).ok_or(Error::OutOfRange {
            index: s,
            bound: family.len(),
        })?;
        for (k, m) in inner.outcomes.iter().enumerate() {
            let f = postprocess(&digits, k);
            if f >= n_outcomes {
                return Err(Error::OutOfRange {
                    index: f,
                    bound: n_outcomes,
                });
            }
            acc[f] += effect.kronecker(m.data());
        }
    }
    let mut wires = state_wires.to_vec();
    wires.extend(first.wires());
    let outcomes = acc
        .into_iter()
        .map(|data| LabeledOperator::new(wires.clone(), data))
        .collect::<Result<Vec<_>>>()?;
    let mut inputs = state_wires.to_vec();
    inputs.extend(first.input_wires.iter().cloned());
    Instrument::new(inputs, first.output_wires.clone(), outcomes)
}

/// Sums outcomes with the same label under `relabel`.
pub fn coarse_grain(
    ins: &Instrument,
    relabel: impl Fn(usize) -> usize,
    n_outcomes: usize,
) -> Result<Instrument> {
    let zero = ins.outcomes[0].scale(c(0.0, 0.0));
    let mut acc = vec![zero; n_outcomes];
    for (k, m) in ins.outcomes.iter().enumerate() {
        let f = relabel(k);
        if f >= n_outcomes {
            return Err(Error::OutOfRange {
                index: f,
                bound: n_outcomes,
            });
        }
        acc[f] = acc[f].add(m)?;
    }
    Instrument::new(ins.input_wires.clone(), ins.output_wires.clone(), acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::pauli;

    fn q(n: &str) -> WireLabel {
        WireLabel::qubit(n)
    }

    fn two_phi_plus(a: &str, b: &str) -> LabeledOperator {
        let one = c(1.0, 0.0);
        LabeledOperator::from_ket(vec![q(a), q(b)], &[one, ZERO, ZERO, one]).unwrap()
    }

    #[test]
    fn identity_channel_choi() {
        let m = choi_of_unitary(&CMatrix::identity(2, 2), q("X_I"), q("X_O")).unwrap();
        assert!(m.max_abs_diff(&two_phi_plus("X_I", "X_O")).unwrap() < 1e-15);
    }

    #[test]
    fn bit_flip_choi_is_psi_plus() {
        let m = choi_of_unitary(&pauli(1), q("X_I"), q("X_O")).unwrap();
        let one = c(1.0, 0.0);
        let psi =
            LabeledOperator::from_ket(vec![q("X_I"), q("X_O")], &[ZERO, one, one, ZERO]).unwrap();
        assert!(m.max_abs_diff(&psi).unwrap() < 1e-15);
        assert!((m.trace().re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn choi_rejects_non_unitary() {
        let bad = CMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(matches!(
            choi_of_unitary(&bad, q("X_I"), q("X_O")),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn lone_entangled_outcome_is_not_cptp() {
        let s = 0.5f64.sqrt();
        let phi = LabeledOperator::from_ket(
            vec![q("X_I"), q("X_O")],
            &[c(s, 0.0), ZERO, ZERO, c(s, 0.0)],
        )
        .unwrap();
        let ins = Instrument::new(vec![q("X_I")], vec![q("X_O")], vec![phi]).unwrap();
        let r = validate_instrument(&ins).unwrap();
        assert!(!r.valid);
        assert!((r.max_residual() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_instrument_is_an_error() {
        assert!(matches!(
            Instrument::new(vec![q("X_I")], vec![q("X_O")], vec![]),
            Err(Error::EmptyInstrument)
        ));
    }

    #[test]
    fn computational_measure_and_reprepare() {
        let basis = computational_basis(2);
        let ins = measure_prepare_instrument(q("X_I"), q("X_O"), &basis, &basis).unwrap();
        assert!(validate_instrument(&ins).unwrap().valid);
        let p00 =
            LabeledOperator::diagonal(vec![q("X_I"), q("X_O")], &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let p11 =
            LabeledOperator::diagonal(vec![q("X_I"), q("X_O")], &[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(ins.outcomes[0], p00);
        assert_eq!(ins.outcomes[1], p11);
    }

    #[test]
    fn non_orthonormal_basis_rejected() {
        let s = 0.5f64.sqrt();
        let basis = vec![basis_vector(2, 0), vec![c(s, 0.0), c(s, 0.0)]];
        assert!(matches!(
            measure_prepare_instrument(q("X_I"), q("X_O"), &basis, &basis),
            Err(Error::NotOrthonormal(_))
        ));
    }

    #[test]
    fn conjugation_by_z_on_input() {
        let zero = LabeledOperator::diagonal(vec![q("X_I"), q("X_O")], &[0.0; 4]).unwrap();
        let ins = Instrument::new(
            vec![q("X_I")],
            vec![q("X_O")],
            vec![zero, two_phi_plus("X_I", "X_O")],
        )
        .unwrap();
        let z = pauli(3);
        let conj = conjugate_instrument(&ins, &z, "X_I").unwrap();
        // (Z⊗I)(|00⟩+|11⟩) = |00⟩−|11⟩
        let one = c(1.0, 0.0);
        let expected =
            LabeledOperator::from_ket(vec![q("X_I"), q("X_O")], &[one, ZERO, ZERO, -one]).unwrap();
        assert!(conj.outcomes[1].max_abs_diff(&expected).unwrap() < 1e-15);
        let twice = conjugate_instrument(
            &conjugate_instrument(&ins, &pauli(1), "X_I").unwrap(),
            &pauli(1),
            "X_I",
        )
        .unwrap();
        for (a, b) in twice.outcomes.iter().zip(&ins.outcomes) {
            assert!(a.max_abs_diff(b).unwrap() < 1e-15);
        }
    }

    #[test]
    fn trivial_extension_is_measure_then_apply() {
        let basis = computational_basis(2);
        let inner0 = measure_prepare_instrument(q("X_I"), q("X_O"), &basis, &basis).unwrap();
        let inner1 = discard_and_prepare(q("X_I"), q("X_O"), &basis[0]).unwrap();
        let inner1 = Instrument::new(
            inner1.input_wires.clone(),
            inner1.output_wires.clone(),
            vec![
                inner1.outcomes[0].clone(),
                inner1.outcomes[0].scale(c(0.0, 0.0)),
            ],
        )
        .unwrap();
        let comp = extend_instrument_with_measurement(
            &[inner0.clone(), inner1.clone()],
            &[q("S")],
            &CMatrix::identity(2, 2),
            |m| m[0],
            |_, k| k,
            2,
        )
        .unwrap();
        assert!(validate_instrument(&comp).unwrap().valid);
        let p0 = LabeledOperator::diagonal(vec![q("S")], &[1.0, 0.0]).unwrap();
        let p1 = LabeledOperator::diagonal(vec![q("S")], &[0.0, 1.0]).unwrap();
        for k in 0..2 {
            let expected = kron(&p0, &inner0.outcomes[k])
                .unwrap()
                .add(&kron(&p1, &inner1.outcomes[k]).unwrap())
                .unwrap();
            assert!(comp.outcomes[k].max_abs_diff(&expected).unwrap() < 1e-15);
        }
    }

    #[test]
    fn coarse_graining_stays_valid() {
        let basis = computational_basis(3);
        let ins = measure_prepare_instrument(
            WireLabel::new("X_I", 3),
            WireLabel::new("X_O", 3),
            &basis,
            &basis,
        )
        .unwrap();
        let cg = coarse_grain(&ins, |k| usize::from(k > 0), 2).unwrap();
        assert_eq!(cg.len(), 2);
        assert!(validate_instrument(&cg).unwrap().valid);
    }
}
