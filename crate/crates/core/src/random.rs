//! Seeded random states, channels, instruments, processes and strategies
//! for property tests.

use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::games::{Encoder, Encoding, GameStrategy};
use crate::instruments::Instrument;
use crate::processes::{
    build_cyril, channel_process_a_before_b, channel_process_b_before_a, mixture, ProcessMatrix,
};
use crate::tensor::{c, kron, partial_trace, CMatrix, LabeledOperator, WireLabel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ginibre(rng: &mut impl Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Full-rank density operator `G G^dag / Tr`.
pub fn random_state(rng: &mut impl Rng, wires: Vec<WireLabel>) -> LabeledOperator {
    let n = wires.iter().map(|w| w.dim).product();
    let g = ginibre(rng, n);
    let mut rho = &g * g.adjoint();
    let tr = rho.trace();
    rho /= tr;
    LabeledOperator::new(wires, rho).expect("dimensions match")
}

/// Haar-ish unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> CMatrix {
    let qr = ginibre(rng, d).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let z = r[(i, i)];
            z / z.norm()
        } else {
            c(0.0, 0.0)
        }
    });
    q * phases
}

fn inv_sqrt_psd(m: &CMatrix) -> CMatrix {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let v = &eig.eigenvectors;
    let n = m.nrows();
    let mut diag = CMatrix::zeros(n, n);
    for i in 0..n {
        diag[(i, i)] = c(1.0 / eig.eigenvalues[i].sqrt(), 0.0);
    }
    v * diag * v.adjoint()
}

/// Instrument with `n` outcomes: independent Wishart operators, jointly
/// rescaled by `(T^{-1/2} ⊗ I)` where `T` is the output marginal of their
/// sum.
pub fn random_instrument(
    rng: &mut impl Rng,
    inputs: Vec<WireLabel>,
    outputs: Vec<WireLabel>,
    n: usize,
) -> Result<Instrument> {
    let wires: Vec<WireLabel> = inputs.iter().chain(&outputs).cloned().collect();
    let side: usize = wires.iter().map(|w| w.dim).product();
    let raw: Vec<CMatrix> = (0..n)
        .map(|_| {
            let g = ginibre(rng, side);
            &g * g.adjoint()
        })
        .collect();
    let mut sum = CMatrix::zeros(side, side);
    for x in &raw {
        sum += x;
    }
    let out_names: Vec<&str> = outputs.iter().map(|w| w.name.as_str()).collect();
    let t = partial_trace(&LabeledOperator::new(wires.clone(), sum)?, &out_names)?;
    let t_half = LabeledOperator::new(inputs.clone(), inv_sqrt_psd(t.data()))?;
    let scale = if outputs.is_empty() {
        t_half
    } else {
        kron(&t_half, &LabeledOperator::identity(outputs.clone())?)?
    };
    let outcomes = raw
        .into_iter()
        .map(|x| LabeledOperator::new(wires.clone(), scale.data() * x * scale.data()))
        .collect::<Result<Vec<_>>>()?;
    Instrument::new(inputs, outputs, outcomes)
}

/// Choi operator of a random channel `input → output`.
pub fn random_channel(
    rng: &mut impl Rng,
    input: WireLabel,
    output: WireLabel,
) -> Result<LabeledOperator> {
    let ins = random_instrument(rng, vec![input], vec![output], 1)?;
    Ok(ins.outcomes.into_iter().next().unwrap())
}

/// Convex mixture of a random `A ≺ B` process and a random `B ≺ A` process;
/// at `d = 2` the Cyril process joins the mixture.
pub fn random_process(rng: &mut impl Rng, d: usize) -> Result<ProcessMatrix> {
    let wl = |n: &str| WireLabel::new(n, d);
    let rho_a = random_state(rng, vec![wl("A_I")]);
    let ch_ab = random_channel(rng, wl("A_O"), wl("B_I"))?;
    let w_ab = channel_process_a_before_b(&rho_a, &ch_ab, d)?;
    let rho_b = random_state(rng, vec![wl("B_I")]);
    let ch_ba = random_channel(rng, wl("B_O"), wl("A_I"))?;
    let w_ba = channel_process_b_before_a(&rho_b, &ch_ba, d)?;
    let mut weights: Vec<f64> = (0..if d == 2 { 3 } else { 2 })
        .map(|_| rng.random::<f64>() + 0.05)
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    if d == 2 {
        let cyril = build_cyril();
        mixture(&[
            (weights[0], &w_ab),
            (weights[1], &w_ba),
            (weights[2], &cyril),
        ])
    } else {
        mixture(&[(weights[0], &w_ab), (weights[1], &w_ba)])
    }
}

/// Random process with one random `d`-outcome instrument per party and
/// input.
pub fn random_gyni_strategy(rng: &mut impl Rng, d: usize) -> Result<GameStrategy> {
    let w = random_process(rng, d)?;
    let wl = |n: &str| WireLabel::new(n, d);
    let mut alice = Vec::with_capacity(d);
    let mut bob = Vec::with_capacity(d);
    for _ in 0..d {
        alice.push(random_instrument(rng, vec![wl("A_I")], vec![wl("A_O")], d)?);
        bob.push(random_instrument(rng, vec![wl("B_I")], vec![wl("B_O")], d)?);
    }
    GameStrategy::gyni(w, Vec::new(), alice, bob, d)
}

/// Random process with random instruments that also act on the code wires
/// `A` and `B`.
pub fn random_dr_strategy(rng: &mut impl Rng, d: usize) -> Result<GameStrategy> {
    let w = random_process(rng, d)?;
    let wl = |n: &str| WireLabel::new(n, d);
    let alice = random_instrument(rng, vec![wl("A"), wl("A_I")], vec![wl("A_O")], d)?;
    let bob = random_instrument(rng, vec![wl("B"), wl("B_I")], vec![wl("B_O")], d)?;
    let enc = Encoding {
        alice_wire: "A".into(),
        bob_wire: "B".into(),
        encoder: Encoder::Bell,
    };
    GameStrategy::dr(w, Vec::new(), alice, bob, enc, d)
}
