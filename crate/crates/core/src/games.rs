//! Success probabilities of the guess-your-neighbour's-input game (GYNI) and
//! the Bell-state data-retrieval task (DR), both evaluated with the trace
//! rule.
//!
//! A [`GameStrategy`] bundles a process, any extra shared states, and one
//! instrument per party and classical input. For DR the referee's encoded
//! state is supplied per code word by an [`Encoder`]; the parties'
//! instruments then act on the encoded wire too.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instruments::{
    basis_vector, computational_basis, discard_and_prepare, extend_instrument_with_measurement,
    measure_prepare_instrument, validate_instrument, Instrument,
};
use crate::processes::{
    bipartite_slots, build_cyril, channel_process_a_before_b, extend_with_state,
    maximally_mixed_process, ProcessMatrix,
};
use crate::tensor::{
    c, kron, partial_trace, trace_product, CMatrix, LabeledOperator, WireLabel, ZERO,
};
use crate::TOL;

/// Generalized Bell code word `(x1, x2)` in dimension `d`: `x1` shifts,
/// `x2` sets the phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BellCode {
    pub d: usize,
    pub x1: usize,
    pub x2: usize,
}

impl BellCode {
    pub fn new(d: usize, x1: usize, x2: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension {
                name: "bell".into(),
                dim: d,
            });
        }
        for x in [x1, x2] {
            if x >= d {
                return Err(Error::OutOfRange { index: x, bound: d });
            }
        }
        Ok(Self { d, x1, x2 })
    }

    pub fn all(d: usize) -> Vec<BellCode> {
        (0..d)
            .flat_map(|x1| (0..d).map(move |x2| BellCode { d, x1, x2 }))
            .collect()
    }
}

/// `ω^m` with `ω = e^{2πi/d}`, exact at quarter turns.
pub fn omega_pow(d: usize, m: usize) -> Complex64 {
    let m = m % d;
    if (4 * m).is_multiple_of(d) {
        match 4 * m / d {
            0 => c(1.0, 0.0),
            1 => c(0.0, 1.0),
            2 => c(-1.0, 0.0),
            _ => c(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * m as f64 / d as f64)
    }
}

/// `1/√d`, using the correctly rounded constant at `d = 2`.
pub fn inv_sqrt(d: usize) -> f64 {
    if d == 2 {
        std::f64::consts::FRAC_1_SQRT_2
    } else {
        1.0 / (d as f64).sqrt()
    }
}

/// `(1/√d) Σ_k ω^{x2 k} |k⟩|k ⊕ x1⟩` on wires `a`, `b`.
pub fn bell_state_on(code: BellCode, a: &str, b: &str) -> LabeledOperator {
    let d = code.d;
    let norm = inv_sqrt(d);
    let mut v = vec![ZERO; d * d];
    for k in 0..d {
        v[k * d + (k + code.x1) % d] = omega_pow(d, code.x2 * k) * norm;
    }
    LabeledOperator::from_ket(vec![WireLabel::new(a, d), WireLabel::new(b, d)], &v).unwrap()
}

pub fn bell_state(code: BellCode) -> LabeledOperator {
    bell_state_on(code, "A", "B")
}

/// The two-qubit encoding `(|0 x1⟩ + (−1)^{x2} |1 x̄1⟩)/√2` written out
/// directly.
pub fn bell_state_qubit(x1: usize, x2: usize, a: &str, b: &str) -> LabeledOperator {
    let norm = std::f64::consts::FRAC_1_SQRT_2;
    let sign = if x2 == 0 { 1.0 } else { -1.0 };
    let mut v = vec![ZERO; 4];
    v[x1] = c(norm, 0.0);
    v[2 + (1 - x1)] = c(sign * norm, 0.0);
    LabeledOperator::from_ket(vec![WireLabel::qubit(a), WireLabel::qubit(b)], &v).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Game {
    Gyni { d: usize },
    Dr { d: usize },
}

impl Game {
    pub fn d(self) -> usize {
        match self {
            Game::Gyni { d } | Game::Dr { d } => d,
        }
    }
}

/// How the referee's code word becomes a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Encoder {
    /// [`bell_state_on`] in the game's dimension.
    Bell,
    /// [`bell_state_qubit`]; qubits only.
    BellQubit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Encoding {
    pub alice_wire: String,
    pub bob_wire: String,
    pub encoder: Encoder,
}

impl Encoding {
    pub fn state(&self, code: BellCode) -> Result<LabeledOperator> {
        match self.encoder {
            Encoder::Bell => Ok(bell_state_on(code, &self.alice_wire, &self.bob_wire)),
            Encoder::BellQubit if code.d == 2 => Ok(bell_state_qubit(
                code.x1,
                code.x2,
                &self.alice_wire,
                &self.bob_wire,
            )),
            Encoder::BellQubit => Err(Error::Structure("qubit encoder used with d != 2".into())),
        }
    }
}

/// A state shared ahead of time, with the owning party of each wire.
#[derive(Clone, Debug, PartialEq)]
pub struct SharedState {
    pub state: LabeledOperator,
    pub owners: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameStrategy {
    pub process: ProcessMatrix,
    pub resources: Vec<SharedState>,
    /// Indexed by Alice's classical input; a single entry for DR.
    pub alice: Vec<Instrument>,
    pub bob: Vec<Instrument>,
    pub game: Game,
    pub encoding: Option<Encoding>,
}

impl GameStrategy {
    pub fn gyni(
        process: ProcessMatrix,
        resources: Vec<SharedState>,
        alice: Vec<Instrument>,
        bob: Vec<Instrument>,
        d: usize,
    ) -> Result<Self> {
        let s = Self {
            process,
            resources,
            alice,
            bob,
            game: Game::Gyni { d },
            encoding: None,
        };
        s.check_shapes()?;
        Ok(s)
    }

    pub fn dr(
        process: ProcessMatrix,
        resources: Vec<SharedState>,
        alice: Instrument,
        bob: Instrument,
        encoding: Encoding,
        d: usize,
    ) -> Result<Self> {
        let s = Self {
            process,
            resources,
            alice: vec![alice],
            bob: vec![bob],
            game: Game::Dr { d },
            encoding: Some(encoding),
        };
        s.check_shapes()?;
        Ok(s)
    }

    pub fn d(&self) -> usize {
        self.game.d()
    }

    fn party_names(&self) -> Result<(String, String)> {
        match self.process.parties() {
            [a, b] => Ok((a.name.clone(), b.name.clone())),
            _ => Err(Error::Structure("games need exactly two parties".into())),
        }
    }

    /// Wires each party's instruments must act on.
    pub fn party_wires(&self) -> Result<(Vec<String>, Vec<String>)> {
        let (an, bn) = self.party_names()?;
        let mut wa: Vec<String> = Vec::new();
        let mut wb: Vec<String> = Vec::new();
        for p in self.process.parties() {
            let target = if p.name == an { &mut wa } else { &mut wb };
            target.extend(p.all_wires().iter().map(|s| s.to_string()));
        }
        for r in &self.resources {
            for (w, o) in r.state.wires().iter().zip(&r.owners) {
                if *o == an {
                    wa.push(w.name.clone());
                } else if *o == bn {
                    wb.push(w.name.clone());
                } else {
                    return Err(Error::Structure(format!("no party named `{o}`")));
                }
            }
        }
        if let Some(e) = &self.encoding {
            wa.push(e.alice_wire.clone());
            wb.push(e.bob_wire.clone());
        }
        Ok((wa, wb))
    }

    fn check_shapes(&self) -> Result<()> {
        let d = self.d();
        let (wa, wb) = self.party_wires()?;
        let n_inputs = match self.game {
            Game::Gyni { .. } => d,
            Game::Dr { .. } => 1,
        };
        for (family, expected, who) in [(&self.alice, &wa, "Alice"), (&self.bob, &wb, "Bob")] {
            if family.len() != n_inputs {
                return Err(Error::Structure(format!(
                    "{who} has {} instruments, expected {n_inputs}",
                    family.len()
                )));
            }
            for ins in family.iter() {
                let mut have = ins.wire_names();
                let mut want = expected.clone();
                have.sort();
                want.sort();
                if have != want {
                    return Err(Error::Structure(format!(
                        "{who}'s instrument acts on {have:?}, expected {want:?}"
                    )));
                }
                if ins.len() != d {
                    return Err(Error::Structure(format!(
                        "{who}'s instrument has {} outcomes, expected {d}",
                        ins.len()
                    )));
                }
            }
        }
        if self.game == (Game::Dr { d }) && self.encoding.is_none() {
            return Err(Error::Structure("DR strategy without encoding".into()));
        }
        Ok(())
    }

    /// Process with every shared resource tensored in.
    pub fn extended_process(&self) -> Result<ProcessMatrix> {
        let mut w = self.process.clone();
        for r in &self.resources {
            let owners: Vec<&str> = r.owners.iter().map(String::as_str).collect();
            w = extend_with_state(&w, &r.state, &owners)?;
        }
        Ok(w)
    }

    /// Every instrument validity report, Alice's first.
    pub fn instrument_reports(&self) -> Result<Vec<crate::processes::ValidityReport>> {
        self.alice
            .iter()
            .chain(&self.bob)
            .map(validate_instrument)
            .collect()
    }
}

/// Per-input contribution to a game value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub inputs: [usize; 2],
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameValue {
    pub value: f64,
    pub terms: Vec<Term>,
}

fn contract(ops: &[&LabeledOperator]) -> Result<f64> {
    let mut x = ops[0].clone();
    for op in &ops[1..] {
        x = trace_product(&x, op)?;
    }
    if !x.wires().is_empty() {
        return Err(Error::Structure(format!(
            "wires {:?} left uncontracted",
            x.wire_names()
        )));
    }
    let p = x.data()[(0, 0)];
    if p.im.abs() > TOL {
        return Err(Error::NotHermitian(p.im.abs()));
    }
    Ok(p.re)
}

/// `Tr[W_ext (M_A^{a|x} ⊗ M_B^{b|y})]`. For GYNI `inputs` are the parties'
/// inputs; for DR they are the code word `(x1, x2)`.
pub fn joint_probability(
    s: &GameStrategy,
    inputs: [usize; 2],
    outcomes: [usize; 2],
) -> Result<f64> {
    let d = s.d();
    for v in inputs.iter().chain(&outcomes) {
        if *v >= d {
            return Err(Error::OutOfRange {
                index: *v,
                bound: d,
            });
        }
    }
    let (ia, ib) = match s.game {
        Game::Gyni { .. } => (inputs[0], inputs[1]),
        Game::Dr { .. } => (0, 0),
    };
    let ea = s.alice[ia].outcome(outcomes[0])?;
    let eb = s.bob[ib].outcome(outcomes[1])?;
    let encoded = match (&s.game, &s.encoding) {
        (Game::Dr { .. }, Some(e)) => Some(e.state(BellCode::new(d, inputs[0], inputs[1])?)?),
        (Game::Dr { .. }, None) => {
            return Err(Error::Structure("DR strategy without encoding".into()))
        }
        _ => None,
    };
    let mut chain: Vec<&LabeledOperator> = vec![ea, s.process.op()];
    chain.extend(s.resources.iter().map(|r| &r.state));
    if let Some(e) = &encoded {
        chain.push(e);
    }
    chain.push(eb);
    contract(&chain)
}

/// `P(a, b | inputs)` as a `d × d` table.
pub fn outcome_distribution(s: &GameStrategy, inputs: [usize; 2]) -> Result<Vec<Vec<f64>>> {
    let d = s.d();
    (0..d)
        .map(|a| {
            (0..d)
                .map(|b| joint_probability(s, inputs, [a, b]))
                .collect()
        })
        .collect()
}

/// `(1/d²) Σ_{i1,i2} P(a = i2, b = i1 | i1, i2)`.
pub fn eval_gyni(s: &GameStrategy) -> Result<GameValue> {
    let d = match s.game {
        Game::Gyni { d } => d,
        _ => return Err(Error::Structure("not a GYNI strategy".into())),
    };
    let mut terms = Vec::with_capacity(d * d);
    let mut total = 0.0;
    for i1 in 0..d {
        for i2 in 0..d {
            let p = joint_probability(s, [i1, i2], [i2, i1])?;
            total += p;
            terms.push(Term {
                inputs: [i1, i2],
                probability: p,
            });
        }
    }
    Ok(GameValue {
        value: total / (d * d) as f64,
        terms,
    })
}

/// `(1/d²) Σ_x P(a = x1, b = x2 | B^x)`.
pub fn eval_dr(s: &GameStrategy) -> Result<GameValue> {
    let d = match s.game {
        Game::Dr { d } => d,
        _ => return Err(Error::Structure("not a DR strategy".into())),
    };
    let mut terms = Vec::with_capacity(d * d);
    let mut total = 0.0;
    for code in BellCode::all(d) {
        let p = joint_probability(s, [code.x1, code.x2], [code.x1, code.x2])?;
        total += p;
        terms.push(Term {
            inputs: [code.x1, code.x2],
            probability: p,
        });
    }
    Ok(GameValue {
        value: total / (d * d) as f64,
        terms,
    })
}

/// Same as [`eval_dr`] with the encoder swapped out.
pub fn eval_dr_with(s: &GameStrategy, encoder: Encoder) -> Result<GameValue> {
    let mut t = s.clone();
    match &mut t.encoding {
        Some(e) => e.encoder = encoder,
        None => return Err(Error::Structure("DR strategy without encoding".into())),
    }
    eval_dr(&t)
}

/// Largest deviation of either marginal of any code word's state from
/// `I/d`.
pub fn hiding_deviation(encoding: &Encoding, d: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for code in BellCode::all(d) {
        let rho = encoding.state(code)?;
        for (traced, kept) in [
            (&encoding.bob_wire, &encoding.alice_wire),
            (&encoding.alice_wire, &encoding.bob_wire),
        ] {
            let m = partial_trace(&rho, &[traced.as_str()])?;
            let target = LabeledOperator::maximally_mixed(vec![WireLabel::new(kept.clone(), d)])?;
            worst = worst.max(m.max_abs_diff(&target)?);
        }
    }
    Ok(worst)
}

fn q(n: &str) -> WireLabel {
    WireLabel::qubit(n)
}

fn two_phi_plus(a: &str, b: &str) -> LabeledOperator {
    let one = c(1.0, 0.0);
    LabeledOperator::from_ket(vec![q(a), q(b)], &[one, ZERO, ZERO, one]).unwrap()
}

/// Instrument family for one party, indexed by input: input 0 passes the
/// system through and always reports 1; input 1 measures Z, reports the
/// result and prepares `|0⟩`.
pub fn cyril_instruments(input: &str, output: &str) -> Vec<Instrument> {
    let (i, o) = (q(input), q(output));
    let zero = LabeledOperator::diagonal(vec![i.clone(), o.clone()], &[0.0; 4]).unwrap();
    let pass = Instrument::new(
        vec![i.clone()],
        vec![o.clone()],
        vec![zero, two_phi_plus(input, output)],
    )
    .unwrap();
    let basis = computational_basis(2);
    let reset = vec![basis_vector(2, 0), basis_vector(2, 0)];
    let measure = measure_prepare_instrument(i, o, &basis, &reset).unwrap();
    vec![pass, measure]
}

/// The family with input 1 re-preparing the measured value instead
/// (`|k⟩⟨k| ⊗ |k⟩⟨k|`).
pub fn cyril_instruments_as_printed(input: &str, output: &str) -> Vec<Instrument> {
    let (i, o) = (q(input), q(output));
    let mut fam = cyril_instruments(input, output);
    let basis = computational_basis(2);
    fam[1] = measure_prepare_instrument(i, o, &basis, &basis).unwrap();
    fam
}

pub fn cyril_gyni_strategy() -> GameStrategy {
    GameStrategy::gyni(
        build_cyril(),
        Vec::new(),
        cyril_instruments("A_I", "A_O"),
        cyril_instruments("B_I", "B_O"),
        2,
    )
    .unwrap()
}

pub fn cyril_gyni_strategy_as_printed() -> GameStrategy {
    GameStrategy::gyni(
        build_cyril(),
        Vec::new(),
        cyril_instruments_as_printed("A_I", "A_O"),
        cyril_instruments_as_printed("B_I", "B_O"),
        2,
    )
    .unwrap()
}

/// `5/16 (1 + 1/√2)`.
pub fn cyril_value() -> f64 {
    5.0 / 16.0 * (1.0 + std::f64::consts::FRAC_1_SQRT_2)
}

/// Pauli-Y eigenvectors: `|+i⟩ = (|0⟩ + i|1⟩)/√2` ("up") and `|−i⟩`.
pub fn y_basis() -> [Vec<Complex64>; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [vec![c(s, 0.0), c(0.0, s)], vec![c(s, 0.0), c(0.0, -s)]]
}

/// Change of basis whose row `m` is `⟨y_m|`, so measuring the computational
/// basis afterwards measures Pauli Y.
fn y_rotation() -> CMatrix {
    let yb = y_basis();
    CMatrix::from_fn(2, 2, |m, j| yb[m][j].conj())
}

fn y_measuring_party(
    state: &str,
    input: &str,
    output: &str,
    up_outcome: usize,
) -> Result<Instrument> {
    let inner = discard_and_prepare(q(input), q(output), &basis_vector(2, 0))?;
    extend_instrument_with_measurement(
        &[inner],
        &[q(state)],
        &y_rotation(),
        |_| 0,
        move |m, _| {
            if m[0] == 0 {
                up_outcome
            } else {
                1 - up_outcome
            }
        },
        2,
    )
}

/// Both parties measure Pauli Y on their half of the code state and ignore
/// the process; Alice reports up→0, down→1 and Bob up→1, down→0.
pub fn pauli_y_baseline_strategy() -> GameStrategy {
    let alice = y_measuring_party("A", "A_I", "A_O", 0).unwrap();
    let bob = y_measuring_party("B", "B_I", "B_O", 1).unwrap();
    GameStrategy::dr(
        maximally_mixed_process(2).unwrap(),
        Vec::new(),
        alice,
        bob,
        Encoding {
            alice_wire: "A".into(),
            bob_wire: "B".into(),
            encoder: Encoder::BellQubit,
        },
        2,
    )
    .unwrap()
}

/// One row of the Pauli-Y outcome table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YTableRow {
    pub x: [usize; 2],
    pub alice_up: bool,
    pub bob_up: bool,
    pub probability: f64,
    pub success: bool,
}

/// Every outcome pair with nonzero probability, per code word.
pub fn pauli_y_table(s: &GameStrategy) -> Result<Vec<YTableRow>> {
    let mut rows = Vec::new();
    for code in BellCode::all(2) {
        for (alice_up, a) in [(true, 0), (false, 1)] {
            for (bob_up, b) in [(true, 1), (false, 0)] {
                let p = joint_probability(s, [code.x1, code.x2], [a, b])?;
                if p > TOL {
                    rows.push(YTableRow {
                        x: [code.x1, code.x2],
                        alice_up,
                        bob_up,
                        probability: p,
                        success: a == code.x1 && b == code.x2,
                    });
                }
            }
        }
    }
    Ok(rows)
}

fn constant_family(ins: &[WireLabel], outs: &[WireLabel], d: usize) -> Result<Instrument> {
    let mut wires = ins.to_vec();
    wires.extend_from_slice(outs);
    let id_in = LabeledOperator::identity(ins.to_vec())?;
    let mut v0 = vec![ZERO; outs.iter().map(|w| w.dim).product()];
    v0[0] = c(1.0, 0.0);
    let prep = LabeledOperator::from_ket(outs.to_vec(), &v0)?;
    let first = kron(&id_in, &prep)?;
    let mut outcomes = vec![first.clone()];
    for _ in 1..d {
        outcomes.push(first.scale(c(0.0, 0.0)));
    }
    Instrument::new(ins.to_vec(), outs.to_vec(), outcomes)
}

/// Both parties ignore everything and always answer 0.
pub fn constant_guess_strategy(game: Game) -> Result<GameStrategy> {
    let d = game.d();
    let w = maximally_mixed_process(d)?;
    let wl = |n: &str| WireLabel::new(n, d);
    match game {
        Game::Gyni { .. } => {
            let a = constant_family(&[wl("A_I")], &[wl("A_O")], d)?;
            let b = constant_family(&[wl("B_I")], &[wl("B_O")], d)?;
            GameStrategy::gyni(w, Vec::new(), vec![a; d], vec![b; d], d)
        }
        Game::Dr { .. } => {
            let a = constant_family(&[wl("A"), wl("A_I")], &[wl("A_O")], d)?;
            let b = constant_family(&[wl("B"), wl("B_I")], &[wl("B_O")], d)?;
            let enc = Encoding {
                alice_wire: "A".into(),
                bob_wire: "B".into(),
                encoder: Encoder::Bell,
            };
            GameStrategy::dr(w, Vec::new(), a, b, enc, d)
        }
    }
}

/// Alice sends her input to Bob through an identity channel and guesses 0;
/// Bob reads the input and reports it.
pub fn one_way_gyni_strategy() -> GameStrategy {
    let rho = LabeledOperator::maximally_mixed(vec![q("A_I")]).unwrap();
    let w = channel_process_a_before_b(&rho, &two_phi_plus("A_O", "B_I"), 2).unwrap();
    let alice: Vec<Instrument> = (0..2)
        .map(|i| {
            let prep = discard_and_prepare(q("A_I"), q("A_O"), &basis_vector(2, i)).unwrap();
            let zero = prep.outcomes[0].scale(c(0.0, 0.0));
            Instrument::new(
                vec![q("A_I")],
                vec![q("A_O")],
                vec![prep.outcomes[0].clone(), zero],
            )
            .unwrap()
        })
        .collect();
    let basis = computational_basis(2);
    let reset = vec![basis_vector(2, 0), basis_vector(2, 0)];
    let bob = measure_prepare_instrument(q("B_I"), q("B_O"), &basis, &reset).unwrap();
    debug_assert_eq!(w.parties(), bipartite_slots().as_slice());
    GameStrategy::gyni(w, Vec::new(), alice, vec![bob.clone(), bob], 2).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_code_zero_is_phi_plus() {
        let s = 0.5f64.sqrt();
        let phi =
            LabeledOperator::from_ket(vec![q("A"), q("B")], &[c(s, 0.0), ZERO, ZERO, c(s, 0.0)])
                .unwrap();
        let b = bell_state(BellCode::new(2, 0, 0).unwrap());
        assert!(b.max_abs_diff(&phi).unwrap() < 1e-15);
    }

    #[test]
    fn qubit_codes_are_orthonormal() {
        let codes = BellCode::all(2);
        for x in &codes {
            for y in &codes {
                let g = bell_state(*x).trace_with(&bell_state(*y)).unwrap();
                let want = if x == y { 1.0 } else { 0.0 };
                assert!((g - c(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn general_and_literal_qubit_encoders_agree() {
        for code in BellCode::all(2) {
            let g = bell_state(code);
            let l = bell_state_qubit(code.x1, code.x2, "A", "B");
            assert_eq!(g, l, "{code:?}");
        }
    }

    #[test]
    fn qutrit_marginals() {
        let rho = bell_state(BellCode::new(3, 2, 1).unwrap());
        for w in ["A", "B"] {
            let m = partial_trace(&rho, &[w]).unwrap();
            let target = LabeledOperator::maximally_mixed(vec![WireLabel::new(
                if w == "A" { "B" } else { "A" },
                3,
            )])
            .unwrap();
            assert!(m.max_abs_diff(&target).unwrap() < 1e-12);
        }
        assert!(BellCode::new(3, 3, 0).is_err());
    }

    #[test]
    fn cyril_value_and_normalization() {
        let s = cyril_gyni_strategy();
        let v = eval_gyni(&s).unwrap();
        assert!((v.value - cyril_value()).abs() < 1e-12, "{}", v.value);
        for i1 in 0..2 {
            for i2 in 0..2 {
                let dist = outcome_distribution(&s, [i1, i2]).unwrap();
                let total: f64 = dist.iter().flatten().sum();
                assert!((total - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn printed_family_gives_a_lower_value() {
        let v = eval_gyni(&cyril_gyni_strategy_as_printed()).unwrap().value;
        assert!((v - 0.4450825214724775).abs() < 1e-12, "{v}");
    }

    #[test]
    fn one_way_and_constant_values() {
        assert!((eval_gyni(&one_way_gyni_strategy()).unwrap().value - 0.5).abs() < 1e-12);
        let g = constant_guess_strategy(Game::Gyni { d: 2 }).unwrap();
        assert!((eval_gyni(&g).unwrap().value - 0.25).abs() < 1e-12);
        let dr = constant_guess_strategy(Game::Dr { d: 2 }).unwrap();
        assert!((eval_dr(&dr).unwrap().value - 0.25).abs() < 1e-12);
        let dr3 = constant_guess_strategy(Game::Dr { d: 3 }).unwrap();
        assert!((eval_dr(&dr3).unwrap().value - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_y_baseline_is_one_half() {
        let s = pauli_y_baseline_strategy();
        assert!((eval_dr(&s).unwrap().value - 0.5).abs() < 1e-12);
        let rows = pauli_y_table(&s).unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows.iter().filter(|r| r.success).count(), 4);
    }

    #[test]
    fn wrong_game_is_rejected() {
        let s = cyril_gyni_strategy();
        assert!(eval_dr(&s).is_err());
        assert!(joint_probability(&s, [2, 0], [0, 0]).is_err());
    }

    #[test]
    fn hiding_holds_for_both_encoders() {
        for (enc, d) in [
            (Encoder::Bell, 2),
            (Encoder::BellQubit, 2),
            (Encoder::Bell, 3),
        ] {
            let e = Encoding {
                alice_wire: "A".into(),
                bob_wire: "B".into(),
                encoder: enc,
            };
            assert!(hiding_deviation(&e, d).unwrap() < 1e-12);
        }
    }
}
