//! Tripartite classical data retrieval with exact rational enumeration.
//!
//! Three players A, B, C share two copies of a Bell pair per neighbouring
//! couple. The referee's six bits choose the code words of the three pairs;
//! each player must identify or eliminate the code word of its own pair.
//! Players measure the first copy in Z and the second in X, so only the
//! outcome correlations matter: on a pair with code `(y, y′)` the two Z
//! outcomes XOR to `y` and the two X outcomes XOR to `y′`, and one holder's
//! outcomes are uniform. Enumerating those uniform bits gives exact
//! probabilities.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{bell_state, BellCode};
use crate::instruments::computational_basis;
use crate::tensor::{c, kron, LabeledOperator, WireLabel};

pub type Prob = Ratio<u64>;
pub type Bits3 = [u8; 3];

pub const A: usize = 0;
pub const B: usize = 1;
pub const C: usize = 2;

pub fn maj(o: Bits3) -> u8 {
    u8::from(o[0] + o[1] + o[2] >= 2)
}

/// Majority-controlled cyclic process: majority 0 rotates the outputs
/// forward, majority 1 rotates the other way and flips them.
pub fn e_bw(o: Bits3) -> Bits3 {
    let [a, b, c] = o;
    if maj(o) == 0 {
        [c, a, b]
    } else {
        [1 - b, 1 - c, 1 - a]
    }
}

fn bits3(n: usize) -> Bits3 {
    [((n >> 2) & 1) as u8, ((n >> 1) & 1) as u8, (n & 1) as u8]
}

fn index3(b: Bits3) -> usize {
    (b[0] as usize) << 2 | (b[1] as usize) << 1 | b[2] as usize
}

/// Deterministic map from output triples to input triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalProcess3 {
    table: [Bits3; 8],
}

impl ClassicalProcess3 {
    pub fn from_fn(f: impl Fn(Bits3) -> Bits3) -> Self {
        let mut table = [[0u8; 3]; 8];
        for (n, row) in table.iter_mut().enumerate() {
            *row = f(bits3(n));
        }
        Self { table }
    }

    pub fn ebw() -> Self {
        Self::from_fn(e_bw)
    }

    pub fn apply(&self, o: Bits3) -> Bits3 {
        self.table[index3(o)]
    }

    /// `(outputs, inputs)` rows in lexicographic order of the outputs.
    pub fn rows(&self) -> Vec<(Bits3, Bits3)> {
        (0..8).map(|n| (bits3(n), self.table[n])).collect()
    }

    /// The unique input triple consistent with local output rules
    /// `o_X = local(X, i_X)`.
    pub fn fixed_point(&self, local: impl Fn(usize, u8) -> u8) -> Result<Bits3> {
        let mut found = None;
        for n in 0..8 {
            let i = bits3(n);
            let o = [local(A, i[0]), local(B, i[1]), local(C, i[2])];
            if self.apply(o) == i {
                if found.is_some() {
                    return Err(Error::Structure(
                        "several consistent input assignments".into(),
                    ));
                }
                found = Some(i);
            }
        }
        found.ok_or_else(|| Error::Structure("no consistent input assignment".into()))
    }

    /// Every choice of deterministic local maps `{0,1} → {0,1}` has exactly
    /// one consistent input assignment.
    pub fn is_logically_consistent(&self) -> bool {
        let maps = [[0u8, 0], [0, 1], [1, 0], [1, 1]];
        for fa in maps {
            for fb in maps {
                for fc in maps {
                    let f = [fa, fb, fc];
                    if self.fixed_point(|p, i| f[p][i as usize]).is_err() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Six referee bits `(x1, x1′, x2, x2′, x3, x3′)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TdrInput {
    pub x: [u8; 6],
}

impl TdrInput {
    pub fn from_index(n: usize) -> Self {
        let mut x = [0u8; 6];
        for (k, b) in x.iter_mut().enumerate() {
            *b = ((n >> (5 - k)) & 1) as u8;
        }
        Self { x }
    }

    pub fn all() -> impl Iterator<Item = TdrInput> {
        (0..64).map(Self::from_index)
    }

    /// Code word `(x_k, x_k′)` of pair `k`.
    pub fn pair(&self, k: usize) -> (u8, u8) {
        (self.x[2 * k], self.x[2 * k + 1])
    }
}

/// `{0 y ȳ′, 0 ȳ y′, 0 ȳ ȳ′, 1 y y′}`: eliminate any wrong string, or name
/// the right one.
pub fn win_set(y: u8, yp: u8) -> [Bits3; 4] {
    let (ny, nyp) = (1 - y, 1 - yp);
    [[0, y, nyp], [0, ny, yp], [0, ny, nyp], [1, y, yp]]
}

pub fn wins(guess: Bits3, y: u8, yp: u8) -> bool {
    win_set(y, yp).contains(&guess)
}

/// Which holders share pair `k`; the first listed is the pair's owner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layout {
    /// `x1` on (A, C), `x2` on (B, A), `x3` on (C, B).
    Clockwise,
    /// `x1` on (A, B), `x2` on (B, C), `x3` on (C, A).
    Anticlockwise,
}

impl Layout {
    pub fn pairs(self) -> [(usize, usize); 3] {
        match self {
            Layout::Clockwise => [(A, C), (B, A), (C, B)],
            Layout::Anticlockwise => [(A, B), (B, C), (C, A)],
        }
    }

    /// The player whose pair ends at `p`.
    pub fn incoming(self, p: usize) -> usize {
        self.pairs().iter().find(|(_, q)| *q == p).unwrap().0
    }

    /// The other holder of `p`'s own pair.
    pub fn outgoing(self, p: usize) -> usize {
        self.pairs()[p].1
    }
}

/// Which holder's outcomes are taken as the uniform ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreeBit {
    FirstListed,
    SecondListed,
}

/// Z and X outcomes indexed `[holder][partner]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Outcomes {
    pub z: [[u8; 3]; 3],
    pub x: [[u8; 3]; 3],
}

impl Outcomes {
    /// Outcomes for referee bits `input` and uniform bits `free` (two per
    /// pair, Z then X).
    pub fn simulate(input: &TdrInput, layout: Layout, conv: FreeBit, free: u8) -> Self {
        let mut m = Outcomes::default();
        for (k, (p, q)) in layout.pairs().into_iter().enumerate() {
            let (y, yp) = input.pair(k);
            let fz = (free >> (2 * k)) & 1;
            let fx = (free >> (2 * k + 1)) & 1;
            let (free_holder, other) = match conv {
                FreeBit::FirstListed => (p, q),
                FreeBit::SecondListed => (q, p),
            };
            m.z[free_holder][other] = fz;
            m.z[other][free_holder] = fz ^ y;
            m.x[free_holder][other] = fx;
            m.x[other][free_holder] = fx ^ yp;
        }
        m
    }

    pub fn on(&self, holder: usize, partner: usize) -> (u8, u8) {
        (self.z[holder][partner], self.x[holder][partner])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TdrStrategy {
    /// The majority-controlled classical process.
    Ebw,
    /// The chain A ≺ B ≺ C with two-bit messages.
    DefiniteOrder,
    /// No communication; everyone eliminates at random.
    NoCollab,
}

impl FromStr for TdrStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ebw" => Ok(Self::Ebw),
            "definite" | "definite-order" => Ok(Self::DefiniteOrder),
            "none" | "no-collab" => Ok(Self::NoCollab),
            other => Err(Error::UnknownToken(other.to_string())),
        }
    }
}

impl fmt::Display for TdrStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ebw => "ebw",
            Self::DefiniteOrder => "definite",
            Self::NoCollab => "none",
        })
    }
}

fn not(b: u8) -> u8 {
    1 - b
}

/// Guesses of all three players for one run, plus the majority of the
/// outputs where a process is involved.
struct Run {
    guesses: [Bits3; 3],
    majority: Option<u8>,
}

/// Outputs are the product of the player's two outcomes on its incoming
/// pair (negated on the flagged layout); guesses use the input as flag and
/// the negated outcomes on the player's own pair.
fn ebw_run(m: &Outcomes, layout: Layout) -> Result<Run> {
    let negate = layout == Layout::Anticlockwise;
    let process = ClassicalProcess3::ebw();
    let outputs: Vec<u8> = (0..3)
        .map(|p| {
            let (z, x) = m.on(p, layout.incoming(p));
            let o = z & x;
            if negate {
                not(o)
            } else {
                o
            }
        })
        .collect();
    let i = process.fixed_point(|p, _| outputs[p])?;
    let mut guesses = [[0u8; 3]; 3];
    for (p, g) in guesses.iter_mut().enumerate() {
        let (z, x) = m.on(p, layout.outgoing(p));
        *g = [i[p], not(z), not(x)];
    }
    Ok(Run {
        guesses,
        majority: Some(maj([outputs[0], outputs[1], outputs[2]])),
    })
}

/// `i_A = 0`, `i_B = o_A`, `i_C = o_B`. On the clockwise layout Alice sends
/// her half of Bob's pair and Bob his half of Charlie's; on the other
/// layout Alice sends her half of Charlie's pair and Bob forwards it.
/// Whoever receives the partner's half decodes exactly; the rest eliminate
/// with their own outcomes.
fn relay_run(m: &Outcomes, layout: Layout) -> Run {
    let eliminate = |p: usize| {
        let (z, x) = m.on(p, layout.outgoing(p));
        [0, z, x]
    };
    let decode = |p: usize, msg: (u8, u8)| {
        let (z, x) = m.on(p, layout.outgoing(p));
        [1, z ^ msg.0, x ^ msg.1]
    };
    let guesses = match layout {
        Layout::Clockwise => {
            let o_a = m.on(A, B);
            let o_b = m.on(B, C);
            [eliminate(A), decode(B, o_a), decode(C, o_b)]
        }
        Layout::Anticlockwise => {
            let o_a = m.on(A, C);
            let o_b = o_a;
            [eliminate(A), eliminate(B), decode(C, o_b)]
        }
    };
    Run {
        guesses,
        majority: None,
    }
}

fn coin_run(coins: u8) -> Run {
    let mut guesses = [[0u8; 3]; 3];
    for (p, g) in guesses.iter_mut().enumerate() {
        *g = [0, (coins >> (2 * p)) & 1, (coins >> (2 * p + 1)) & 1];
    }
    Run {
        guesses,
        majority: None,
    }
}

fn all_win(input: &TdrInput, guesses: &[Bits3; 3]) -> bool {
    (0..3).all(|p| {
        let (y, yp) = input.pair(p);
        wins(guesses[p], y, yp)
    })
}

/// Exact counts from one full enumeration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TdrBreakdown {
    pub total: Prob,
    pub per_input: Vec<Prob>,
    /// Probability that the outputs have majority 0, when a process fixes
    /// the inputs.
    pub p_majority_zero: Option<Prob>,
    pub success_given_majority_zero: Option<Prob>,
    pub success_given_majority_one: Option<Prob>,
    pub per_party: [Prob; 3],
    pub cases: u64,
}

/// Enumerates all 64 referee inputs and all 64 uniform bits.
pub fn tdr_breakdown(strategy: TdrStrategy, layout: Layout, conv: FreeBit) -> Result<TdrBreakdown> {
    let mut per_input = Vec::with_capacity(64);
    let (mut wins_total, mut cases) = (0u64, 0u64);
    let (mut maj0, mut win_maj0, mut win_maj1) = (0u64, 0u64, 0u64);
    let mut party_wins = [0u64; 3];
    for input in TdrInput::all() {
        let mut w = 0u64;
        for free in 0..64u8 {
            let run = match strategy {
                TdrStrategy::Ebw => {
                    ebw_run(&Outcomes::simulate(&input, layout, conv, free), layout)?
                }
                TdrStrategy::DefiniteOrder => {
                    relay_run(&Outcomes::simulate(&input, layout, conv, free), layout)
                }
                TdrStrategy::NoCollab => coin_run(free),
            };
            let ok = all_win(&input, &run.guesses);
            for (p, pw) in party_wins.iter_mut().enumerate() {
                let (y, yp) = input.pair(p);
                *pw += u64::from(wins(run.guesses[p], y, yp));
            }
            w += u64::from(ok);
            match run.majority {
                Some(0) => {
                    maj0 += 1;
                    win_maj0 += u64::from(ok);
                }
                Some(_) => win_maj1 += u64::from(ok),
                None => {}
            }
            cases += 1;
        }
        wins_total += w;
        per_input.push(Prob::new(w, 64));
    }
    let has_maj = strategy == TdrStrategy::Ebw;
    let maj1 = cases - maj0;
    Ok(TdrBreakdown {
        total: Prob::new(wins_total, cases),
        per_input,
        p_majority_zero: has_maj.then(|| Prob::new(maj0, cases)),
        success_given_majority_zero: (has_maj && maj0 > 0).then(|| Prob::new(win_maj0, maj0)),
        success_given_majority_one: (has_maj && maj1 > 0).then(|| Prob::new(win_maj1, maj1)),
        per_party: party_wins.map(|w| Prob::new(w, cases)),
        cases,
    })
}

pub fn tdr_success(strategy: TdrStrategy) -> Result<Prob> {
    Ok(tdr_breakdown(strategy, Layout::Clockwise, FreeBit::FirstListed)?.total)
}

pub fn tdr_success_ebw() -> Prob {
    tdr_success(TdrStrategy::Ebw).expect("the process is logically consistent")
}

pub fn tdr_success_no_collab() -> Prob {
    tdr_success(TdrStrategy::NoCollab).expect("no process involved")
}

pub fn tdr_success_definite_order() -> Prob {
    tdr_success(TdrStrategy::DefiniteOrder).expect("no process involved")
}

/// One player alone, with uniformly random value bits, either eliminating
/// (flag 0) or identifying (flag 1).
pub fn single_party_success(identify: bool) -> Prob {
    let flag = u8::from(identify);
    let mut w = 0;
    for y in 0..4u8 {
        for coins in 0..4u8 {
            w += u64::from(wins([flag, coins & 1, coins >> 1], y & 1, y >> 1));
        }
    }
    Prob::new(w, 16)
}

/// Flagged variant: a uniform flag picks the layout and the players know
/// it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FtdrValue {
    pub flag0: Prob,
    pub flag1: Prob,
    pub total: Prob,
}

pub fn ftdr_success(strategy: TdrStrategy) -> Result<FtdrValue> {
    let flag0 = tdr_breakdown(strategy, Layout::Clockwise, FreeBit::FirstListed)?.total;
    let flag1 = tdr_breakdown(strategy, Layout::Anticlockwise, FreeBit::FirstListed)?.total;
    Ok(FtdrValue {
        flag0,
        flag1,
        total: (flag0 + flag1) / 2,
    })
}

/// Code word from Z outcomes and X outcomes of the two holders.
pub fn two_copy_locc_decode(z_bits: (u8, u8), x_bits: (u8, u8)) -> BellCode {
    BellCode {
        d: 2,
        x1: usize::from(z_bits.0 ^ z_bits.1),
        x2: usize::from(x_bits.0 ^ x_bits.1),
    }
}

/// Fraction of (code word, uniform bits) cases decoded correctly.
pub fn two_copy_decode_success() -> Prob {
    let mut w = 0;
    for code in BellCode::all(2) {
        for free in 0..4u8 {
            let (fz, fx) = (free & 1, free >> 1);
            let z = (fz, fz ^ code.x1 as u8);
            let x = (fx, fx ^ code.x2 as u8);
            w += u64::from(two_copy_locc_decode(z, x) == code);
        }
    }
    Prob::new(w, 16)
}

/// Checks the correlations assumed above on actual Bell states: Z outcomes
/// XOR to `x1`, X outcomes XOR to `x2`, and each single outcome is uniform.
/// Returns the largest deviation.
pub fn bell_pair_correlation_deviation() -> f64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z_basis = computational_basis(2);
    let x_basis = vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]];
    let mut worst = 0.0f64;
    for code in BellCode::all(2) {
        let rho = bell_state(code);
        for (basis, target) in [(&z_basis, code.x1), (&x_basis, code.x2)] {
            let mut p_xor = 0.0;
            for u in 0..2 {
                let mut p_u = 0.0;
                for v in 0..2 {
                    let pa =
                        LabeledOperator::from_ket(vec![WireLabel::qubit("A")], &basis[u]).unwrap();
                    let pb =
                        LabeledOperator::from_ket(vec![WireLabel::qubit("B")], &basis[v]).unwrap();
                    let p = rho.trace_with(&kron(&pa, &pb).unwrap()).unwrap().re;
                    p_u += p;
                    if u ^ v == target {
                        p_xor += p;
                    }
                }
                worst = worst.max((p_u - 0.5).abs());
            }
            worst = worst.max((p_xor - 1.0).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64, d: u64) -> Prob {
        Prob::new(n, d)
    }

    #[test]
    fn ebw_rows() {
        assert_eq!(e_bw([0, 0, 1]), [1, 0, 0]);
        assert_eq!(e_bw([0, 0, 0]), [0, 0, 0]);
        assert_eq!(e_bw([1, 1, 1]), [0, 0, 0]);
        assert!(ClassicalProcess3::ebw().is_logically_consistent());
        let identity = ClassicalProcess3::from_fn(|o| o);
        assert!(!identity.is_logically_consistent());
    }

    #[test]
    fn win_sets() {
        let mut w = win_set(0, 0).to_vec();
        w.sort();
        assert_eq!(w, vec![[0, 0, 1], [0, 1, 0], [0, 1, 1], [1, 0, 0]]);
        for y in 0..2 {
            for yp in 0..2 {
                assert!(wins([1, y, yp], y, yp));
                assert!(!wins([0, y, yp], y, yp));
            }
        }
    }

    #[test]
    fn headline_values() {
        assert_eq!(tdr_success_ebw(), r(27, 32));
        assert_eq!(tdr_success_no_collab(), r(27, 64));
        assert_eq!(tdr_success_definite_order(), r(3, 4));
    }

    #[test]
    fn free_bit_convention_does_not_matter() {
        for s in [TdrStrategy::Ebw, TdrStrategy::DefiniteOrder] {
            for layout in [Layout::Clockwise, Layout::Anticlockwise] {
                let a = tdr_breakdown(s, layout, FreeBit::FirstListed).unwrap();
                let b = tdr_breakdown(s, layout, FreeBit::SecondListed).unwrap();
                assert_eq!(a.per_input, b.per_input, "{s} {layout:?}");
            }
        }
    }

    #[test]
    fn flagged_values() {
        let e = ftdr_success(TdrStrategy::Ebw).unwrap();
        assert_eq!(
            (e.flag0, e.flag1, e.total),
            (r(27, 32), r(27, 32), r(27, 32))
        );
        let d = ftdr_success(TdrStrategy::DefiniteOrder).unwrap();
        assert_eq!((d.flag0, d.flag1, d.total), (r(3, 4), r(9, 16), r(21, 32)));
    }

    #[test]
    fn single_party_baselines() {
        assert_eq!(single_party_success(false), r(3, 4));
        assert_eq!(single_party_success(true), r(1, 4));
    }

    #[test]
    fn decoding() {
        assert_eq!(
            two_copy_locc_decode((0, 0), (0, 0)),
            BellCode { d: 2, x1: 0, x2: 0 }
        );
        assert_eq!(
            two_copy_locc_decode((0, 1), (0, 0)),
            BellCode { d: 2, x1: 1, x2: 0 }
        );
        assert_eq!(two_copy_decode_success(), r(1, 1));
        assert!(bell_pair_correlation_deviation() < 1e-12);
    }

    #[test]
    fn strategy_tokens() {
        assert_eq!("ebw".parse::<TdrStrategy>().unwrap(), TdrStrategy::Ebw);
        assert!(matches!(
            "best".parse::<TdrStrategy>(),
            Err(Error::UnknownToken(_))
        ));
    }
}
