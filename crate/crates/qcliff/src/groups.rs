//! Quaternions, the complex and quaternionic structures on `R^{4p}`, the
//! embeddings φ and ψ, Spin elements and their action on vectors.
//!
//! Vectors are rows and matrices act on the right: `Y = X A`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::clifford::{blade_from_indices, Multivector};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{rat, FieldElement};

/// `q0 + q1 i + q2 j + q3 k` with real components and `k = ij`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub q0: FieldElement,
    pub q1: FieldElement,
    pub q2: FieldElement,
    pub q3: FieldElement,
}

impl Quaternion {
    pub fn new(q0: FieldElement, q1: FieldElement, q2: FieldElement, q3: FieldElement) -> Result<Self> {
        if ![&q0, &q1, &q2, &q3].iter().all(|x| x.is_real()) {
            return Err(Error::InvalidArgument("quaternion components must be real".into()));
        }
        Ok(Quaternion { q0, q1, q2, q3 })
    }

    pub fn from_ints(q: [i64; 4]) -> Self {
        Quaternion {
            q0: FieldElement::from_int(q[0]),
            q1: FieldElement::from_int(q[1]),
            q2: FieldElement::from_int(q[2]),
            q3: FieldElement::from_int(q[3]),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ints([1, 0, 0, 0])
    }

    pub fn unit_i() -> Self {
        Self::from_ints([0, 1, 0, 0])
    }

    pub fn unit_j() -> Self {
        Self::from_ints([0, 0, 1, 0])
    }

    pub fn unit_k() -> Self {
        Self::from_ints([0, 0, 0, 1])
    }

    /// `z + w j` with complex `z, w`.
    pub fn from_complex(z: &FieldElement, w: &FieldElement) -> Self {
        Quaternion { q0: z.re(), q1: z.im(), q2: w.re(), q3: w.im() }
    }

    /// `z = q0 + q1 i`.
    pub fn z(&self) -> FieldElement {
        &self.q0 + &(&self.q1 * &FieldElement::i())
    }

    /// `w = q2 + q3 i`.
    pub fn w(&self) -> FieldElement {
        &self.q2 + &(&self.q3 * &FieldElement::i())
    }

    pub fn conj(&self) -> Self {
        Quaternion { q0: self.q0.clone(), q1: -&self.q1, q2: -&self.q2, q3: -&self.q3 }
    }

    /// `q0² + q1² + q2² + q3²`.
    pub fn norm_sq(&self) -> FieldElement {
        [&self.q0, &self.q1, &self.q2, &self.q3].iter().fold(FieldElement::zero(), |acc, x| &acc + &(*x * *x))
    }

    pub fn is_zero(&self) -> bool {
        self.q0.is_zero() && self.q1.is_zero() && self.q2.is_zero() && self.q3.is_zero()
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Quaternion { q0: &self.q0 * c, q1: &self.q1 * c, q2: &self.q2 * c, q3: &self.q3 * c }
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.conj().scale(&self.norm_sq().inv()?))
    }
}

impl<'a> Add<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;
    fn add(self, o: &Quaternion) -> Quaternion {
        Quaternion { q0: &self.q0 + &o.q0, q1: &self.q1 + &o.q1, q2: &self.q2 + &o.q2, q3: &self.q3 + &o.q3 }
    }
}

impl<'a> Sub<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;
    fn sub(self, o: &Quaternion) -> Quaternion {
        Quaternion { q0: &self.q0 - &o.q0, q1: &self.q1 - &o.q1, q2: &self.q2 - &o.q2, q3: &self.q3 - &o.q3 }
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion { q0: -&self.q0, q1: -&self.q1, q2: -&self.q2, q3: -&self.q3 }
    }
}

impl<'a> Mul<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;
    fn mul(self, o: &Quaternion) -> Quaternion {
        let (a0, a1, a2, a3) = (&self.q0, &self.q1, &self.q2, &self.q3);
        let (b0, b1, b2, b3) = (&o.q0, &o.q1, &o.q2, &o.q3);
        Quaternion {
            q0: &(&(a0 * b0) - &(a1 * b1)) - &(&(a2 * b2) + &(a3 * b3)),
            q1: &(&(a0 * b1) + &(a1 * b0)) + &(&(a2 * b3) - &(a3 * b2)),
            q2: &(&(a0 * b2) - &(a1 * b3)) + &(&(a2 * b0) + &(a3 * b1)),
            q3: &(&(a0 * b3) + &(a1 * b2)) + &(&(a3 * b0) - &(a2 * b1)),
        }
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i + ({})j + ({})k", self.q0, self.q1, self.q2, self.q3)
    }
}

/// Dense matrix of quaternions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Quaternion::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.data[k * n + k] = Quaternion::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::InvalidArgument("ragged quaternion matrix".into()));
        }
        Ok(QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Quaternion {
        &self.data[i * self.cols + j]
    }

    pub fn mul(&self, o: &QMatrix) -> Result<QMatrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch { left: self.cols, right: o.rows });
        }
        let mut out = QMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = Quaternion::zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * o.get(k, j));
                }
                out.data[i * o.cols + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|q| q.scale(c)).collect() }
    }

    pub fn add(&self, o: &QMatrix) -> Result<QMatrix> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::DimensionMismatch { left: self.rows * self.cols, right: o.rows * o.cols });
        }
        Ok(QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() })
    }

    /// `A*`: transpose with quaternion conjugation.
    pub fn conj_transpose(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == QMatrix::identity(self.rows) && self.rows == self.cols
    }

    /// `A A* = E`.
    pub fn is_symplectic(&self) -> Result<bool> {
        Ok(self.rows == self.cols && self.mul(&self.conj_transpose())?.is_identity())
    }

    /// Row vector times matrix, `(q_1, ..., q_p) A`.
    pub fn apply_row(&self, v: &[Quaternion]) -> Result<Vec<Quaternion>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch { left: self.rows, right: v.len() });
        }
        Ok((0..self.cols)
            .map(|j| v.iter().enumerate().fold(Quaternion::zero(), |acc, (i, q)| &acc + &(q * self.get(i, j))))
            .collect())
    }
}

/// `α_{2p}`: `(a_1 + b_1 i, ...) ↦ (a_1, b_1, ...)`.
pub fn alpha_vec(v: &[FieldElement]) -> Vec<FieldElement> {
    v.iter().flat_map(|z| [z.re(), z.im()]).collect()
}

/// `β_p`: `(z + w j, ...) ↦ (z, w, ...)`.
pub fn beta_vec(v: &[Quaternion]) -> Vec<FieldElement> {
    v.iter().flat_map(|q| [q.z(), q.w()]).collect()
}

/// `γ_p = α_{2p} ∘ β_p`.
pub fn gamma_vec(v: &[Quaternion]) -> Vec<FieldElement> {
    alpha_vec(&beta_vec(v))
}

pub fn gamma_vec_inverse(x: &[FieldElement]) -> Result<Vec<Quaternion>> {
    if x.len() % 4 != 0 {
        return Err(Error::InvalidArgument(format!("length {} is not a multiple of 4", x.len())));
    }
    x.chunks(4).map(|c| Quaternion::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone())).collect()
}

/// `φ`: each complex entry `a + bi` becomes `[[a, b], [-b, a]]`.
pub fn phi_embed(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("φ needs a square matrix".into()));
    }
    let n = a.rows();
    let mut out = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = a.get(i, j);
            let (re, im) = (z.re(), z.im());
            out.set(2 * i, 2 * j, re.clone());
            out.set(2 * i, 2 * j + 1, im.clone());
            out.set(2 * i + 1, 2 * j, -&im);
            out.set(2 * i + 1, 2 * j + 1, re);
        }
    }
    Ok(out)
}

/// Inverse of φ; fails unless every 2×2 block has the form `[[a, b], [-b, a]]` with real entries.
pub fn phi_inverse(b: &Matrix) -> Result<Matrix> {
    if !b.is_square() || b.rows() % 2 != 0 {
        return Err(Error::InvalidArgument("φ⁻¹ needs an even square matrix".into()));
    }
    let n = b.rows() / 2;
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (a, bb) = (b.get(2 * i, 2 * j), b.get(2 * i, 2 * j + 1));
            let ok = a.is_real()
                && bb.is_real()
                && b.get(2 * i + 1, 2 * j) == &-bb
                && b.get(2 * i + 1, 2 * j + 1) == a;
            if !ok {
                return Err(Error::NotInSpan("matrix is not complex linear".into()));
            }
            out.set(i, j, a + &(bb * &FieldElement::i()));
        }
    }
    Ok(out)
}

/// `ψ`: each quaternion entry `z + wj` becomes `[[z, w], [-w̄, z̄]]`.
pub fn psi_embed(a: &QMatrix) -> Result<Matrix> {
    if a.rows() != a.cols() {
        return Err(Error::InvalidArgument("ψ needs a square matrix".into()));
    }
    let n = a.rows();
    let mut out = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let q = a.get(i, j);
            let (z, w) = (q.z(), q.w());
            out.set(2 * i, 2 * j, z.clone());
            out.set(2 * i, 2 * j + 1, w.clone());
            out.set(2 * i + 1, 2 * j, -w.conj());
            out.set(2 * i + 1, 2 * j + 1, z.conj());
        }
    }
    Ok(out)
}

pub fn psi_inverse(b: &Matrix) -> Result<QMatrix> {
    if !b.is_square() || b.rows() % 2 != 0 {
        return Err(Error::InvalidArgument("ψ⁻¹ needs an even square matrix".into()));
    }
    let n = b.rows() / 2;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let (z, w) = (b.get(2 * i, 2 * j), b.get(2 * i, 2 * j + 1));
            let ok = b.get(2 * i + 1, 2 * j) == &-w.conj() && b.get(2 * i + 1, 2 * j + 1) == &z.conj();
            if !ok {
                return Err(Error::NotInSpan("matrix is not quaternionic linear".into()));
            }
            row.push(Quaternion::from_complex(z, w));
        }
        rows.push(row);
    }
    QMatrix::from_rows(rows)
}

fn block_diag(p: usize, block: &[[i64; 4]; 4]) -> Matrix {
    let mut m = Matrix::zeros(4 * p, 4 * p);
    for b in 0..p {
        for (i, row) in block.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if x != 0 {
                    m.set(4 * b + i, 4 * b + j, FieldElement::from_int(x));
                }
            }
        }
    }
    m
}

/// The matrices 𝕀, 𝕁 and 𝕂 = 𝕀𝕁.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureTriple {
    pub i: Matrix,
    pub j: Matrix,
    pub k: Matrix,
}

impl StructureTriple {
    pub fn get(&self, which: Structure) -> &Matrix {
        match which {
            Structure::I => &self.i,
            Structure::J => &self.j,
            Structure::K => &self.k,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Structure {
    I,
    J,
    K,
}

pub fn structure_triple(p: usize) -> Result<StructureTriple> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be positive".into()));
    }
    let i = block_diag(p, &[[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]);
    let j = block_diag(p, &[[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]]);
    let k = block_diag(p, &[[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]);
    Ok(StructureTriple { i, j, k })
}

pub fn is_orthogonal(a: &Matrix) -> Result<bool> {
    Ok(a.is_square() && a.mul(&a.transpose())?.is_identity())
}

pub fn is_special_orthogonal(a: &Matrix) -> Result<bool> {
    Ok(is_orthogonal(a)? && a.det()?.is_one())
}

pub fn is_unitary(a: &Matrix) -> Result<bool> {
    Ok(a.is_square() && a.mul(&a.conj_transpose())?.is_identity())
}

/// An even multivector `s` with `s s̄ = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinElement {
    value: Multivector,
}

impl SpinElement {
    pub fn new(value: Multivector) -> Result<Self> {
        if !value.is_even() {
            return Err(Error::NotSpin("element is not even".into()));
        }
        if !value.product(&value.clifford_conj())?.is_one_scalar() {
            return Err(Error::NotSpin("s s̄ is not 1".into()));
        }
        Ok(SpinElement { value })
    }

    pub fn value(&self) -> &Multivector {
        &self.value
    }

    pub fn dim(&self) -> usize {
        self.value.dim()
    }

    pub fn inverse(&self) -> SpinElement {
        SpinElement { value: self.value.clifford_conj() }
    }

    pub fn mul(&self, o: &SpinElement) -> Result<SpinElement> {
        SpinElement::new(self.value.product(&o.value)?)
    }

    pub fn neg(&self) -> SpinElement {
        SpinElement { value: -&self.value }
    }

    /// `s x s⁻¹`.
    pub fn conjugate(&self, x: &Multivector) -> Result<Multivector> {
        self.value.product(x)?.product(&self.value.clifford_conj())
    }

    pub fn commutes_with(&self, o: &SpinElement) -> Result<bool> {
        Ok(self.value.commutator(&o.value)?.is_zero())
    }
}

trait OneScalar {
    fn is_one_scalar(&self) -> bool;
}

impl OneScalar for Multivector {
    fn is_one_scalar(&self) -> bool {
        self.len() == 1 && self.scalar_part().is_one()
    }
}

/// `Σ c_t (π/4) e_{i_t} e_{j_t}` with integer `c_t`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Pi4Bivector {
    pub terms: Vec<(i64, usize, usize)>,
}

impl Pi4Bivector {
    pub fn new(terms: Vec<(i64, usize, usize)>) -> Self {
        Pi4Bivector { terms }
    }

    /// Same-plane terms merged, planes written with `i < j`.
    pub fn planes(&self) -> Result<BTreeMap<(usize, usize), i64>> {
        let mut planes: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for &(c, i, j) in &self.terms {
            if i == j || i == 0 || j == 0 {
                return Err(Error::InvalidArgument(format!("e{i}e{j} is not a simple bivector")));
            }
            let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
            *planes.entry(key).or_default() += c;
        }
        planes.retain(|_, c| *c != 0);
        Ok(planes)
    }

    /// The bivector divided by π, as a multivector.
    pub fn over_pi(&self, dim: usize) -> Result<Multivector> {
        let mut out = Multivector::zero(dim);
        for ((i, j), c) in self.planes()? {
            out = out.try_add(&Multivector::blade(dim, &[i, j], FieldElement::from_ratio(c, 4))?)?;
        }
        Ok(out)
    }
}

fn cos_sin_pi4(c: i64) -> (FieldElement, FieldElement) {
    let h = FieldElement::sqrt2().scale(&rat(1, 2));
    let z = FieldElement::zero();
    let one = FieldElement::one();
    match c.rem_euclid(8) {
        0 => (one, z),
        1 => (h.clone(), h),
        2 => (z, one),
        3 => (-&h, h),
        4 => (-one, z),
        5 => (-&h, -&h),
        6 => (z, -one),
        _ => (h.clone(), -h),
    }
}

/// `exp` of a sum of plane-disjoint simple bivectors with coefficients in `(π/4)ℤ`.
pub fn exp_pi4_bivector(dim: usize, b: &Pi4Bivector) -> Result<SpinElement> {
    let planes = b.planes()?;
    let mut used = 0u64;
    for &(i, j) in planes.keys() {
        if i > dim || j > dim {
            return Err(Error::IndexOutOfRange(format!("e{i}e{j} in dimension {dim}")));
        }
        let bits = (1u64 << i) | (1u64 << j);
        if used & bits != 0 {
            return Err(Error::InvalidArgument("bivector terms share a basis vector and need not commute".into()));
        }
        used |= bits;
    }
    let mut out = Multivector::one(dim);
    for ((i, j), c) in planes {
        let (cos, sin) = cos_sin_pi4(c);
        let (mask, sign) = blade_from_indices(&[i, j])?;
        let sin = if sign < 0 { -sin } else { sin };
        let factor = Multivector::from_terms(dim, vec![(0, cos), (mask, sin)])?;
        out = out.product(&factor)?;
    }
    SpinElement::new(out)
}

/// `σ_𝕀 = (π/4)(e_1e_2 + e_3e_4 + ... + e_{4p-1}e_{4p})`.
pub fn sigma_i(p: usize) -> Pi4Bivector {
    Pi4Bivector::new((1..=2 * p).map(|j| (1, 2 * j - 1, 2 * j)).collect())
}

/// `σ_𝕁 = (π/4) Σ (e_{4j-3}e_{4j-1} - e_{4j-2}e_{4j})`.
pub fn sigma_j(p: usize) -> Pi4Bivector {
    Pi4Bivector::new((1..=p).flat_map(|j| [(1, 4 * j - 3, 4 * j - 1), (-1, 4 * j - 2, 4 * j)]).collect())
}

/// `s_𝕀 = s_1 ⋯ s_{2p}`, `s_j = (√2/2)(1 + e_{2j-1}e_{2j})`.
pub fn spin_s_i(p: usize) -> Result<SpinElement> {
    let dim = 4 * p;
    let h = FieldElement::sqrt2().scale(&rat(1, 2));
    let mut out = Multivector::one(dim);
    for j in 1..=2 * p {
        let f = Multivector::one(dim).try_add(&Multivector::blade(dim, &[2 * j - 1, 2 * j], FieldElement::one())?)?;
        out = out.product(&f.scale(&h))?;
    }
    SpinElement::new(out)
}

/// `s_𝕁 = s̃_1 ⋯ s̃_p`, `s̃_j = ½(1 + e_{4j-3}e_{4j-1})(1 - e_{4j-2}e_{4j})`.
pub fn spin_s_j(p: usize) -> Result<SpinElement> {
    let dim = 4 * p;
    let mut out = Multivector::one(dim);
    for j in 1..=p {
        let a = Multivector::one(dim).try_add(&Multivector::blade(dim, &[4 * j - 3, 4 * j - 1], FieldElement::one())?)?;
        let b = Multivector::one(dim).try_sub(&Multivector::blade(dim, &[4 * j - 2, 4 * j], FieldElement::one())?)?;
        out = out.product(&a.product(&b)?.scale(&FieldElement::from_ratio(1, 2)))?;
    }
    SpinElement::new(out)
}

/// `σ_A = (π/4)(e_1e_4 - e_2e_3)` and `s_A = ½(1 + e_1e_4)(1 - e_2e_3)` in dimension 4.
pub fn sigma_a() -> Pi4Bivector {
    Pi4Bivector::new(vec![(1, 1, 4), (-1, 2, 3)])
}

pub fn spin_s_a() -> Result<SpinElement> {
    let a = Multivector::one(4).try_add(&Multivector::blade(4, &[1, 4], FieldElement::one())?)?;
    let b = Multivector::one(4).try_sub(&Multivector::blade(4, &[2, 3], FieldElement::one())?)?;
    SpinElement::new(a.product(&b)?.scale(&FieldElement::from_ratio(1, 2)))
}

/// Row α holds the coefficients of `s e_α s⁻¹`, so that `s X s⁻¹ = X A`.
pub fn double_cover_matrix(s: &SpinElement) -> Result<Matrix> {
    let dim = s.dim();
    let mut rows = Vec::with_capacity(dim);
    for alpha in 1..=dim {
        let image = s.conjugate(&Multivector::basis_vector(dim, alpha)?)?;
        if !image.is_homogeneous(1) {
            return Err(Error::NotSpin(format!("s e{alpha} s⁻¹ is not a vector")));
        }
        rows.push(image.vector_coords()?);
    }
    Matrix::from_rows(rows)
}

/// Bivector to skew matrix: `½ e_i e_j ↦ E_ij - E_ji`, so that `[b, X] = X M(b)`.
pub fn bivector_to_skew(b: &Multivector) -> Result<Matrix> {
    if !b.is_homogeneous(2) {
        return Err(Error::InvalidArgument("not a bivector".into()));
    }
    let n = b.dim();
    let mut m = Matrix::zeros(n, n);
    for (mask, c) in b.terms() {
        let idx = crate::clifford::blade_indices(mask);
        let (i, j) = (idx[0] - 1, idx[1] - 1);
        let two_c = c.scale(&rat(2, 1));
        m.set(i, j, m.get(i, j) + &two_c);
        m.set(j, i, m.get(j, i) - &two_c);
    }
    Ok(m)
}

pub fn skew_to_bivector(m: &Matrix) -> Result<Multivector> {
    if !m.is_square() || m.transpose() != m.neg() {
        return Err(Error::InvalidArgument("matrix is not skew-symmetric".into()));
    }
    let n = m.rows();
    let mut out = Multivector::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            let c = m.get(i, j).scale(&rat(1, 2));
            out = out.try_add(&Multivector::blade(n, &[i + 1, j + 1], c)?)?;
        }
    }
    Ok(out)
}

/// `exp(t M) = cos t + sin t M` for `M² = -1` and `t = c π/4`.
pub fn exp_pi4_complex_structure(c: i64, m: &Matrix) -> Result<Matrix> {
    let n = m.rows();
    if !m.is_square() || m.mul(m)? != Matrix::scalar(n, FieldElement::from_int(-1)) {
        return Err(Error::InvalidArgument("matrix does not square to -1".into()));
    }
    let (cos, sin) = cos_sin_pi4(c);
    Matrix::scalar(n, cos).add(&m.scale(&sin))
}

/// Quaternion-matrix version of [`exp_pi4_complex_structure`].
pub fn exp_pi4_quaternion_structure(c: i64, m: &QMatrix) -> Result<QMatrix> {
    let n = m.rows();
    if m.rows() != m.cols() || m.mul(m)? != QMatrix::identity(n).scale(&FieldElement::from_int(-1)) {
        return Err(Error::InvalidArgument("matrix does not square to -1".into()));
    }
    let (cos, sin) = cos_sin_pi4(c);
    QMatrix::identity(n).scale(&cos).add(&m.scale(&sin))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subgroup {
    SoI,
    SoQ,
    SpinI,
    SpinQ,
}

pub enum GroupElement<'a> {
    Matrix(&'a Matrix),
    Spin(&'a SpinElement),
}

pub fn subgroup_membership(x: GroupElement<'_>, which: Subgroup) -> Result<bool> {
    match x {
        GroupElement::Matrix(a) => {
            if !a.is_square() || a.rows() % 4 != 0 || a.rows() == 0 {
                return Err(Error::InvalidArgument(format!("{}×{} is not of size 4p", a.rows(), a.cols())));
            }
            let t = structure_triple(a.rows() / 4)?;
            let commutes = |m: &Matrix| -> Result<bool> { Ok(a.commutator(m)?.is_zero()) };
            match which {
                Subgroup::SoI => Ok(is_special_orthogonal(a)? && commutes(&t.i)?),
                Subgroup::SoQ => Ok(is_special_orthogonal(a)? && commutes(&t.i)? && commutes(&t.j)?),
                Subgroup::SpinI | Subgroup::SpinQ => {
                    Err(Error::InvalidArgument("Spin membership needs a Spin element".into()))
                }
            }
        }
        GroupElement::Spin(s) => {
            if s.dim() % 4 != 0 || s.dim() == 0 {
                return Err(Error::InvalidArgument(format!("dimension {} is not 4p", s.dim())));
            }
            let p = s.dim() / 4;
            match which {
                Subgroup::SpinI => s.commutes_with(&spin_s_i(p)?),
                Subgroup::SpinQ => Ok(s.commutes_with(&spin_s_i(p)?)? && s.commutes_with(&spin_s_j(p)?)?),
                Subgroup::SoI | Subgroup::SoQ => subgroup_membership(GroupElement::Matrix(&double_cover_matrix(s)?), which),
            }
        }
    }
}

/// `φ(ψ(A))` for `A ∈ Sp(p)`, after checking `ψ(A) ∈ SU(2p)` and the image in `SO_Q(4p)`.
pub fn sp_group_roundtrip(a: &QMatrix) -> Result<Matrix> {
    if !a.is_symplectic()? {
        return Err(Error::InvalidArgument("A A* is not the identity".into()));
    }
    let b = psi_embed(a)?;
    if !is_unitary(&b)? || !b.det()?.is_one() {
        return Err(Error::InvalidArgument("ψ(A) is not in SU(2p)".into()));
    }
    let m = phi_embed(&b)?;
    if !subgroup_membership(GroupElement::Matrix(&m), Subgroup::SoQ)? {
        return Err(Error::InvalidArgument("φ(ψ(A)) is not in SO_Q(4p)".into()));
    }
    Ok(m)
}

/// The `4p²` bivectors `σ_j`, `σ_jk`, `σ̃_jk` (`j < k`) generating `Spin_𝕀(4p)`.
pub fn spin_i_generators(p: usize) -> Vec<(String, Pi4Bivector)> {
    let n = 2 * p;
    let mut out: Vec<(String, Pi4Bivector)> =
        (1..=n).map(|j| (format!("σ_{j}"), Pi4Bivector::new(vec![(1, 2 * j - 1, 2 * j)]))).collect();
    for j in 1..=n {
        for k in j + 1..=n {
            out.push((format!("σ_{j}{k}"), Pi4Bivector::new(vec![(1, 2 * j - 1, 2 * k - 1), (1, 2 * j, 2 * k)])));
            out.push((format!("σ̃_{j}{k}"), Pi4Bivector::new(vec![(1, 2 * j - 1, 2 * k), (1, 2 * k - 1, 2 * j)])));
        }
    }
    out
}

/// Image of a row vector under a structure, `𝕄[X] = X 𝕄`.
pub fn twist_row(m: &Matrix, x: &[FieldElement]) -> Result<Vec<FieldElement>> {
    m.apply_row(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_units() {
        let (i, j, k) = (Quaternion::unit_i(), Quaternion::unit_j(), Quaternion::unit_k());
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &i, -&k);
        assert_eq!(&k * &k, -&Quaternion::one());
        assert_eq!(&j * &k, i);
    }

    #[test]
    fn triple_p1() {
        let t = structure_triple(1).unwrap();
        let x: Vec<FieldElement> = (1..=4).map(FieldElement::from_int).collect();
        let y: Vec<FieldElement> = [-2, 1, -4, 3].iter().map(|&v| FieldElement::from_int(v)).collect();
        assert_eq!(t.i.apply_row(&x).unwrap(), y);
        assert_eq!(t.i.mul(&t.j).unwrap(), t.k);
    }

    #[test]
    fn pi4_table() {
        let e = exp_pi4_bivector(4, &Pi4Bivector::default()).unwrap();
        assert_eq!(e.value(), &Multivector::one(4));
        assert!(exp_pi4_bivector(4, &Pi4Bivector::new(vec![(1, 1, 2), (1, 2, 3)])).is_err());
    }
}
