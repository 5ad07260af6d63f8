//! Labeled multi-wire operators.
//!
//! A [`LabeledOperator`] is a dense complex square matrix together with an
//! ordered list of named wires. The leftmost wire is the most significant
//! tensor index, so a row index `r` of an operator over wires with dimensions
//! `[d0, d1, .., dn]` decomposes big-endian into digits `(r0, r1, .., rn)`.
//!
//! Every operation here is a pure function: inputs are borrowed, results are
//! freshly allocated.

use std::collections::HashSet;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::TOL;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A named tensor factor with its Hilbert-space dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WireLabel {
    pub name: String,
    pub dim: usize,
}

impl WireLabel {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        Self {
            name: name.into(),
            dim,
        }
    }

    pub fn qubit(name: impl Into<String>) -> Self {
        Self::new(name, 2)
    }
}

impl fmt::Display for WireLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.dim)
    }
}

/// Shorthand for building a wire list of equal dimension.
pub fn wires(names: &[&str], dim: usize) -> Vec<WireLabel> {
    names.iter().map(|n| WireLabel::new(*n, dim)).collect()
}

/// Dense operator over an ordered list of named wires.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledOperator {
    wires: Vec<WireLabel>,
    data: CMatrix,
}

impl LabeledOperator {
    pub fn new(wires: Vec<WireLabel>, data: CMatrix) -> Result<Self> {
        check_wires(&wires)?;
        let side: usize = wires.iter().map(|w| w.dim).product();
        if data.nrows() != side || data.ncols() != side {
            return Err(Error::DimensionMismatch {
                expected: side,
                actual: data.nrows().max(data.ncols()),
            });
        }
        Ok(Self { wires, data })
    }

    /// A zero-wire operator holding a single number.
    pub fn scalar(value: Complex64) -> Self {
        Self {
            wires: Vec::new(),
            data: CMatrix::from_element(1, 1, value),
        }
    }

    pub fn identity(wires: Vec<WireLabel>) -> Result<Self> {
        let side = wires.iter().map(|w| w.dim).product();
        Self::new(wires, CMatrix::identity(side, side))
    }

    /// Identity divided by its dimension.
    pub fn maximally_mixed(wires: Vec<WireLabel>) -> Result<Self> {
        let op = Self::identity(wires)?;
        let d = op.dim() as f64;
        Ok(op.scale(c(1.0 / d, 0.0)))
    }

    /// The projector `|psi><psi|` for an (unnormalized) vector `psi`.
    pub fn from_ket(wires: Vec<WireLabel>, psi: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        let data = &v * v.adjoint();
        Self::new(wires, data)
    }

    /// Diagonal operator from real entries.
    pub fn diagonal(wires: Vec<WireLabel>, diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut data = CMatrix::zeros(n, n);
        for (i, v) in diag.iter().enumerate() {
            data[(i, i)] = c(*v, 0.0);
        }
        Self::new(wires, data)
    }

    pub fn wires(&self) -> &[WireLabel] {
        &self.wires
    }

    pub fn wire_names(&self) -> Vec<&str> {
        self.wires.iter().map(|w| w.name.as_str()).collect()
    }

    pub fn wire(&self, name: &str) -> Option<&WireLabel> {
        self.wires.iter().find(|w| w.name == name)
    }

    pub fn has_wire(&self, name: &str) -> bool {
        self.wire(name).is_some()
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_data(self) -> CMatrix {
        self.data
    }

    /// Matrix side length.
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            wires: self.wires.clone(),
            data: &self.data * factor,
        }
    }

    pub fn dagger(&self) -> Self {
        Self {
            wires: self.wires.clone(),
            data: self.data.adjoint(),
        }
    }

    /// Entrywise maximum of `|M - M^dag|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[(i, j)] - self.data[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= TOL
    }

    /// Expresses `other` in this operator's wire order, failing if the wire
    /// sets differ.
    pub fn align(&self, other: &LabeledOperator) -> Result<LabeledOperator> {
        if self.wires.len() != other.wires.len() {
            return Err(Error::Structure(format!(
                "wire sets differ: {:?} vs {:?}",
                self.wire_names(),
                other.wire_names()
            )));
        }
        for w in &self.wires {
            match other.wire(&w.name) {
                Some(o) if o.dim == w.dim => {}
                _ => {
                    return Err(Error::Structure(format!(
                        "wire sets differ: {:?} vs {:?}",
                        self.wire_names(),
                        other.wire_names()
                    )))
                }
            }
        }
        let names = self.wire_names();
        permute_wires(other, &names)
    }

    pub fn add(&self, other: &LabeledOperator) -> Result<LabeledOperator> {
        let o = self.align(other)?;
        Ok(Self {
            wires: self.wires.clone(),
            data: &self.data + o.data,
        })
    }

    pub fn sub(&self, other: &LabeledOperator) -> Result<LabeledOperator> {
        let o = self.align(other)?;
        Ok(Self {
            wires: self.wires.clone(),
            data: &self.data - o.data,
        })
    }

    /// Entrywise maximum absolute difference, after aligning wire order.
    pub fn max_abs_diff(&self, other: &LabeledOperator) -> Result<f64> {
        let o = self.align(other)?;
        Ok(max_abs(&(&self.data - &o.data)))
    }

    /// Hilbert–Schmidt inner product `Tr[self · other]` after alignment.
    pub fn trace_with(&self, other: &LabeledOperator) -> Result<Complex64> {
        let o = self.align(other)?;
        Ok(trace_of_product(&self.data, &o.data))
    }

    fn position(&self, name: &str) -> Result<usize> {
        self.wires
            .iter()
            .position(|w| w.name == name)
            .ok_or_else(|| Error::UnknownWire(name.to_string()))
    }

    fn positions(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            if !seen.insert(*n) {
                return Err(Error::DuplicateWire(n.to_string()));
            }
            out.push(self.position(n)?);
        }
        Ok(out)
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.wires.len()];
        for k in (0..self.wires.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.wires[k + 1].dim;
        }
        s
    }

    /// Full-index offsets of every multi-index over the wires at `positions`,
    /// enumerated big-endian in the order the positions are given.
    fn offsets(&self, positions: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut out = vec![0usize];
        for &p in positions {
            let d = self.wires[p].dim;
            let mut next = Vec::with_capacity(out.len() * d);
            for o in &out {
                for v in 0..d {
                    next.push(o + v * strides[p]);
                }
            }
            out = next;
        }
        out
    }

    fn complement(&self, positions: &[usize]) -> Vec<usize> {
        (0..self.wires.len())
            .filter(|p| !positions.contains(p))
            .collect()
    }
}

fn check_wires(wires: &[WireLabel]) -> Result<()> {
    let mut seen = HashSet::new();
    for w in wires {
        if w.dim < 2 {
            return Err(Error::InvalidDimension {
                name: w.name.clone(),
                dim: w.dim,
            });
        }
        if !seen.insert(w.name.as_str()) {
            return Err(Error::DuplicateWire(w.name.clone()));
        }
    }
    Ok(())
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub(crate) fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Tensor product; the result's wires are `a`'s followed by `b`'s.
pub fn kron(a: &LabeledOperator, b: &LabeledOperator) -> Result<LabeledOperator> {
    for w in &b.wires {
        if a.has_wire(&w.name) {
            return Err(Error::DuplicateWire(w.name.clone()));
        }
    }
    let mut wires = a.wires.clone();
    wires.extend(b.wires.iter().cloned());
    Ok(LabeledOperator {
        wires,
        data: a.data.kronecker(&b.data),
    })
}

/// Tensor product of several operators, left to right.
pub fn kron_all(ops: &[&LabeledOperator]) -> Result<LabeledOperator> {
    let mut acc = LabeledOperator::scalar(ONE);
    for op in ops {
        acc = kron(&acc, op)?;
    }
    Ok(acc)
}

/// Traces out the named wires; the remaining wires keep their order.
pub fn partial_trace(op: &LabeledOperator, traced: &[&str]) -> Result<LabeledOperator> {
    let tr = op.positions(traced)?;
    let keep = op.complement(&tr);
    let off_keep = op.offsets(&keep);
    let off_tr = op.offsets(&tr);
    let n = off_keep.len();
    let mut data = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = ZERO;
            for t in &off_tr {
                acc += op.data[(off_keep[i] + t, off_keep[j] + t)];
            }
            data[(i, j)] = acc;
        }
    }
    let wires = keep.iter().map(|&p| op.wires[p].clone()).collect();
    Ok(LabeledOperator { wires, data })
}

/// Transposes the tensor factors on the named wires.
pub fn partial_transpose(op: &LabeledOperator, transposed: &[&str]) -> Result<LabeledOperator> {
    let pos = op.positions(transposed)?;
    if pos.is_empty() {
        return Ok(op.clone());
    }
    let strides = op.strides();
    let n = op.dim();
    // contribution of the transposed wires to each full index
    let contrib: Vec<usize> = (0..n)
        .map(|r| {
            pos.iter()
                .map(|&p| ((r / strides[p]) % op.wires[p].dim) * strides[p])
                .sum()
        })
        .collect();
    let mut data = CMatrix::zeros(n, n);
    for r in 0..n {
        for col in 0..n {
            let src_r = r - contrib[r] + contrib[col];
            let src_c = col - contrib[col] + contrib[r];
            data[(r, col)] = op.data[(src_r, src_c)];
        }
    }
    Ok(LabeledOperator {
        wires: op.wires.clone(),
        data,
    })
}

/// Re-expresses the same operator with its wires in `new_order`.
pub fn permute_wires(op: &LabeledOperator, new_order: &[&str]) -> Result<LabeledOperator> {
    if new_order.len() != op.wires.len() {
        return Err(Error::NotAPermutation(
            new_order.iter().map(|s| s.to_string()).collect(),
        ));
    }
    let pos = op
        .positions(new_order)
        .map_err(|_| Error::NotAPermutation(new_order.iter().map(|s| s.to_string()).collect()))?;
    if pos.iter().enumerate().all(|(i, &p)| i == p) {
        return Ok(op.clone());
    }
    let map = op.offsets(&pos);
    let n = op.dim();
    let data = CMatrix::from_fn(n, n, |i, j| op.data[(map[i], map[j])]);
    let wires = pos.iter().map(|&p| op.wires[p].clone()).collect();
    Ok(LabeledOperator { wires, data })
}

/// All eigenvalues of the Hermitian part, ascending.
pub fn eigenvalues(op: &LabeledOperator) -> Result<Vec<f64>> {
    let dev = op.hermitian_deviation();
    if dev > TOL {
        return Err(Error::NotHermitian(dev));
    }
    let h = (&op.data + op.data.adjoint()) * c(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    Ok(ev)
}

/// Smallest eigenvalue of `(op + op^dag)/2`.
pub fn min_eigenvalue(op: &LabeledOperator) -> Result<f64> {
    Ok(eigenvalues(op)?[0])
}

/// `(Tr_X op) ⊗ I_X / d_X`, with the identity factors put back in place so
/// the result has the same wires, in the same order, as `op`.
pub fn trace_and_replace(op: &LabeledOperator, wires_x: &[&str]) -> Result<LabeledOperator> {
    let xs = op.positions(wires_x)?;
    let keep = op.complement(&xs);
    let off_keep = op.offsets(&keep);
    let off_x = op.offsets(&xs);
    let dx = off_x.len() as f64;
    let n = op.dim();
    let nk = off_keep.len();
    let mut reduced = CMatrix::zeros(nk, nk);
    for i in 0..nk {
        for j in 0..nk {
            let mut acc = ZERO;
            for t in &off_x {
                acc += op.data[(off_keep[i] + t, off_keep[j] + t)];
            }
            reduced[(i, j)] = acc / dx;
        }
    }
    let mut data = CMatrix::zeros(n, n);
    for i in 0..nk {
        for j in 0..nk {
            let v = reduced[(i, j)];
            for t in &off_x {
                data[(off_keep[i] + t, off_keep[j] + t)] = v;
            }
        }
    }
    Ok(LabeledOperator {
        wires: op.wires.clone(),
        data,
    })
}

/// Contracts two operators over every wire name they share:
/// `Tr_S[(a ⊗ I)(b ⊗ I)]` where `S` is the shared set. The result lives on
/// `a`'s unshared wires followed by `b`'s unshared wires. With no shared wires
/// this is `kron(a, b)`; with all wires shared it is the scalar `Tr[a b]`.
///
/// Contracting a product environment against product effects factor by
/// factor yields `Tr[(F1 ⊗ F2 ⊗ ..)(E1 ⊗ E2 ⊗ ..)]` without materializing
/// either tensor product.
pub fn trace_product(a: &LabeledOperator, b: &LabeledOperator) -> Result<LabeledOperator> {
    let shared: Vec<&str> = a
        .wires
        .iter()
        .filter(|w| b.has_wire(&w.name))
        .map(|w| w.name.as_str())
        .collect();
    for s in &shared {
        let (wa, wb) = (a.wire(s).unwrap(), b.wire(s).unwrap());
        if wa.dim != wb.dim {
            return Err(Error::Structure(format!(
                "wire `{s}` has dimension {} on one side and {} on the other",
                wa.dim, wb.dim
            )));
        }
    }
    let a_s = a.positions(&shared)?;
    let b_s = b.positions(&shared)?;
    let a_f = a.complement(&a_s);
    let b_f = b.complement(&b_s);
    let off_as = a.offsets(&a_s);
    let off_af = a.offsets(&a_f);
    let off_bs = b.offsets(&b_s);
    let off_bf = b.offsets(&b_f);
    let ns = off_as.len();
    let naf = off_af.len();
    let nbf = off_bf.len();

    // am[(ar, ac), (s, s')] = A[(s, ar), (s', ac)]
    let am = CMatrix::from_fn(naf * naf, ns * ns, |row, col| {
        let (ar, ac) = (row / naf, row % naf);
        let (s, sp) = (col / ns, col % ns);
        a.data[(off_as[s] + off_af[ar], off_as[sp] + off_af[ac])]
    });
    // bm[(br, bc), (s, s')] = B[(s', br), (s, bc)]
    let bm = CMatrix::from_fn(nbf * nbf, ns * ns, |row, col| {
        let (br, bc) = (row / nbf, row % nbf);
        let (s, sp) = (col / ns, col % ns);
        b.data[(off_bs[sp] + off_bf[br], off_bs[s] + off_bf[bc])]
    });
    let flat = am * bm.transpose();

    let n = naf * nbf;
    let data = CMatrix::from_fn(n, n, |row, col| {
        let (ar, br) = (row / nbf, row % nbf);
        let (ac, bc) = (col / nbf, col % nbf);
        flat[(ar * naf + ac, br * nbf + bc)]
    });
    let mut wires: Vec<WireLabel> = a_f.iter().map(|&p| a.wires[p].clone()).collect();
    wires.extend(b_f.iter().map(|&p| b.wires[p].clone()));
    LabeledOperator::new(wires, data)
}

/// Conjugates `op` by `u` acting on the named wires (in the given order):
/// `(U ⊗ I) op (U ⊗ I)^dag`.
pub fn conjugate_on(op: &LabeledOperator, u: &CMatrix, on: &[&str]) -> Result<LabeledOperator> {
    let pos = op.positions(on)?;
    let sub: Vec<WireLabel> = pos.iter().map(|&p| op.wires[p].clone()).collect();
    let side: usize = sub.iter().map(|w| w.dim).product();
    if u.nrows() != side || u.ncols() != side {
        return Err(Error::DimensionMismatch {
            expected: side,
            actual: u.nrows(),
        });
    }
    let rest: Vec<WireLabel> = op
        .complement(&pos)
        .iter()
        .map(|&p| op.wires[p].clone())
        .collect();
    let local = LabeledOperator::new(sub, u.clone())?;
    let full = kron(&local, &LabeledOperator::identity(rest)?)?;
    let full = permute_wires(&full, &op.wire_names())?;
    Ok(LabeledOperator {
        wires: op.wires.clone(),
        data: &full.data * &op.data * full.data.adjoint(),
    })
}

/// Maximum entrywise deviation of `U^dag U` from the identity.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - CMatrix::identity(n, n)))
}
