//! The operators P, Q, β, the symplectic cells `S_s^r`, the Casimir
//! operator with its projectors, and the cell components of Witt vectors.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{rat, FieldElement, Rational};
use crate::witt::{self, binomial, MonomialChart, SpinorSubspace, SubspaceLabel, WittIndex};

enum Repr {
    Identity,
    LeftMult(Multivector),
    /// `ops[0] ∘ ops[1] ∘ ...`, applied right to left.
    Compose(Vec<LinearOperator>),
    Combination(Vec<(FieldElement, LinearOperator)>),
    PerDegree(BTreeMap<usize, LinearOperator>),
}

/// A linear map on the spinor space that shifts the homogeneity degree by a
/// fixed amount. Matrices on each `S^r` are built on demand and memoized.
#[derive(Clone)]
pub struct LinearOperator {
    p: usize,
    shift: i32,
    name: String,
    repr: Arc<Repr>,
    cache: Arc<Mutex<HashMap<usize, Arc<Matrix>>>>,
}

impl fmt::Debug for LinearOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearOperator({}, p = {}, shift = {})", self.name, self.p, self.shift)
    }
}

impl fmt::Display for LinearOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn chart(p: usize, r: usize) -> Result<Arc<MonomialChart>> {
    static CHARTS: OnceLock<Mutex<HashMap<(usize, usize), Arc<MonomialChart>>>> = OnceLock::new();
    let charts = CHARTS.get_or_init(Default::default);
    if let Some(c) = charts.lock().unwrap().get(&(p, r)) {
        return Ok(c.clone());
    }
    let c = Arc::new(MonomialChart::new(p, r)?);
    charts.lock().unwrap().insert((p, r), c.clone());
    Ok(c)
}

/// Dimension of `S^r`, zero outside `0..=2p`.
fn degree_dim(p: usize, r: i64) -> usize {
    if r < 0 || r > 2 * p as i64 {
        0
    } else {
        binomial(2 * p, r as usize)
    }
}

impl LinearOperator {
    fn new(p: usize, shift: i32, name: impl Into<String>, repr: Repr) -> Self {
        LinearOperator { p, shift, name: name.into(), repr: Arc::new(repr), cache: Default::default() }
    }

    pub fn identity(p: usize) -> Self {
        Self::new(p, 0, "1", Repr::Identity)
    }

    pub fn zero(p: usize, shift: i32) -> Self {
        Self::new(p, shift, "0", Repr::Combination(Vec::new()))
    }

    /// Left multiplication by `x`, which must raise every degree by `shift`.
    pub fn left_mult(p: usize, x: Multivector, shift: i32) -> Result<Self> {
        if x.dim() != witt::algebra_dim(p) {
            return Err(Error::DimensionMismatch { left: witt::algebra_dim(p), right: x.dim() });
        }
        Ok(Self::new(p, shift, "L", Repr::LeftMult(x)))
    }

    pub fn witt(p: usize, idx: WittIndex) -> Result<Self> {
        let x = witt::witt_vector(idx, p)?;
        let op = Self::left_mult(p, x, if idx.dagger { 1 } else { -1 })?;
        Ok(op.named(idx.to_string()))
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    fn check_p(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::DimensionMismatch { left: self.p, right: other.p });
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn then_after(&self, other: &Self) -> Result<Self> {
        self.check_p(other)?;
        Ok(Self::new(
            self.p,
            self.shift + other.shift,
            format!("{} {}", self.name, other.name),
            Repr::Compose(vec![self.clone(), other.clone()]),
        ))
    }

    /// Composition of a chain, leftmost applied last.
    pub fn compose(p: usize, chain: &[LinearOperator]) -> Result<Self> {
        if chain.is_empty() {
            return Ok(Self::identity(p));
        }
        for op in chain {
            if op.p != p {
                return Err(Error::DimensionMismatch { left: p, right: op.p });
            }
        }
        let shift = chain.iter().map(|o| o.shift).sum();
        let name = chain.iter().map(|o| o.name.as_str()).collect::<Vec<_>>().join(" ");
        Ok(Self::new(p, shift, name, Repr::Compose(chain.to_vec())))
    }

    pub fn pow(&self, k: u32) -> Self {
        let chain = vec![self.clone(); k as usize];
        Self::compose(self.p, &chain).expect("same p").named(format!("({})^{k}", self.name))
    }

    pub fn combination(p: usize, terms: Vec<(FieldElement, LinearOperator)>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Ok(Self::zero(p, 0));
        };
        let shift = first.1.shift;
        for (_, op) in &terms {
            if op.p != p {
                return Err(Error::DimensionMismatch { left: p, right: op.p });
            }
            if op.shift != shift {
                return Err(Error::InvalidArgument(format!(
                    "cannot add operators of degree shifts {shift} and {}",
                    op.shift
                )));
            }
        }
        let name = terms.iter().map(|(c, o)| format!("({c}){}", o.name)).collect::<Vec<_>>().join(" + ");
        Ok(Self::new(p, shift, name, Repr::Combination(terms)))
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        Self::combination(self.p, vec![(FieldElement::one(), self.clone()), (FieldElement::one(), other.clone())])
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        Self::combination(self.p, vec![(FieldElement::one(), self.clone()), (FieldElement::from_int(-1), other.clone())])
    }

    pub fn scaled(&self, c: FieldElement) -> Self {
        Self::combination(self.p, vec![(c, self.clone())]).expect("single term")
    }

    /// Operator acting as `ops[r]` on `S^r` and as zero on degrees not listed.
    pub fn per_degree(p: usize, shift: i32, ops: BTreeMap<usize, LinearOperator>, name: impl Into<String>) -> Result<Self> {
        for (r, op) in &ops {
            if op.p != p || op.shift != shift || *r > 2 * p {
                return Err(Error::InvalidArgument(format!("degree {r} part of {} does not fit", op.name)));
            }
        }
        Ok(Self::new(p, shift, name, Repr::PerDegree(ops)))
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let ab = self.then_after(other)?;
        let ba = other.then_after(self)?;
        Ok(ab.minus(&ba)?.named(format!("[{}, {}]", self.name, other.name)))
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        let ab = self.then_after(other)?;
        let ba = other.then_after(self)?;
        Ok(ab.plus(&ba)?.named(format!("{{{}, {}}}", self.name, other.name)))
    }

    pub fn target_degree(&self, r: usize) -> Option<usize> {
        let t = r as i64 + self.shift as i64;
        (0..=2 * self.p as i64).contains(&t).then_some(t as usize)
    }

    /// Exact matrix from `S^r` to `S^{r+shift}` in monomial coordinates;
    /// column j is the image of the j-th basis monomial.
    pub fn matrix_on(&self, r: usize) -> Result<Arc<Matrix>> {
        if r > 2 * self.p {
            return Err(Error::InvalidArgument(format!("degree {r} exceeds 2p = {}", 2 * self.p)));
        }
        if let Some(m) = self.cache.lock().unwrap().get(&r) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.build_matrix(r)?);
        self.cache.lock().unwrap().insert(r, m.clone());
        Ok(m)
    }

    fn build_matrix(&self, r: usize) -> Result<Matrix> {
        let src = degree_dim(self.p, r as i64);
        let dst = degree_dim(self.p, r as i64 + self.shift as i64);
        if dst == 0 {
            return Ok(Matrix::zeros(0, src));
        }
        match &*self.repr {
            Repr::Identity => Ok(Matrix::identity(src)),
            Repr::LeftMult(x) => {
                let from = chart(self.p, r)?;
                let to = chart(self.p, self.target_degree(r).unwrap())?;
                let mut cols = Vec::with_capacity(src);
                for &set in &from.sets {
                    let mono = witt::spinor_compose(self.p, &BTreeMap::from([(set, FieldElement::one())]))?;
                    let image = x.product(&mono)?;
                    cols.push(to.coords(&image).map_err(|_| {
                        Error::InvalidArgument(format!("{} does not shift degree {r} by {}", self.name, self.shift))
                    })?);
                }
                Matrix::from_cols(cols, dst)
            }
            Repr::Compose(chain) => {
                let mut m = Matrix::identity(src);
                let mut deg = r as i64;
                for op in chain.iter().rev() {
                    if !(0..=2 * self.p as i64).contains(&deg) {
                        return Ok(Matrix::zeros(dst, src));
                    }
                    m = op.matrix_on(deg as usize)?.mul(&m)?;
                    deg += op.shift as i64;
                }
                Ok(m)
            }
            Repr::Combination(terms) => {
                let mut m = Matrix::zeros(dst, src);
                for (c, op) in terms {
                    m = m.add(&op.matrix_on(r)?.scale(c))?;
                }
                Ok(m)
            }
            Repr::PerDegree(ops) => match ops.get(&r) {
                Some(op) => Ok((*op.matrix_on(r)?).clone()),
                None => Ok(Matrix::zeros(dst, src)),
            },
        }
    }

    /// Applies the operator to an element of the spinor space.
    pub fn apply(&self, x: &Multivector) -> Result<Multivector> {
        if let Repr::LeftMult(m) = &*self.repr {
            return m.product(x);
        }
        let coeffs = witt::spinor_decompose(self.p, x)?;
        let mut by_degree: BTreeMap<usize, BTreeMap<u32, FieldElement>> = BTreeMap::new();
        for (set, c) in coeffs {
            by_degree.entry(set.count_ones() as usize).or_default().insert(set, c);
        }
        let mut out = BTreeMap::new();
        for (r, part) in by_degree {
            let Some(t) = self.target_degree(r) else { continue };
            let from = chart(self.p, r)?;
            let to = chart(self.p, t)?;
            let v: Vec<FieldElement> = from.sets.iter().map(|s| part.get(s).cloned().unwrap_or_default()).collect();
            let w = self.matrix_on(r)?.apply(&v)?;
            for (set, c) in to.sets.iter().zip(w) {
                if !c.is_zero() {
                    out.insert(*set, c);
                }
            }
        }
        witt::spinor_compose(self.p, &out)
    }

    /// Applies the operator to a vector of monomial coordinates on `S^r`.
    pub fn apply_coords(&self, r: usize, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.matrix_on(r)?.apply(v)
    }

    /// Equality of the two operators on `S^r`.
    pub fn equals_on(&self, other: &Self, r: usize) -> Result<bool> {
        self.check_p(other)?;
        if self.shift != other.shift {
            return Ok(false);
        }
        Ok(*self.matrix_on(r)? == *other.matrix_on(r)?)
    }

    /// Equality on every homogeneous part.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        for r in 0..=2 * self.p {
            if !self.equals_on(other, r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_zero(&self) -> Result<bool> {
        for r in 0..=2 * self.p {
            if !self.matrix_on(r)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Matrix of `A B - B A` on `S^r`.
pub fn commutator_on(a: &LinearOperator, b: &LinearOperator, r: usize) -> Result<Matrix> {
    Ok((*a.commutator(b)?.matrix_on(r)?).clone())
}

struct StandardOps {
    p: LinearOperator,
    q: LinearOperator,
    beta: LinearOperator,
    casimir: LinearOperator,
}

fn standard(p: usize) -> Result<Arc<StandardOps>> {
    static OPS: OnceLock<Mutex<HashMap<usize, Arc<StandardOps>>>> = OnceLock::new();
    let ops = OPS.get_or_init(Default::default);
    if let Some(s) = ops.lock().unwrap().get(&p) {
        return Ok(s.clone());
    }
    let m = witt::algebra_dim(p);
    witt::primitive_idempotent(p)?;
    let mut pm = Multivector::zero(m);
    let mut qm = Multivector::zero(m);
    let mut bm = Multivector::zero(m);
    for k in 1..=p {
        pm = &pm + &(&witt::f(p, 2 * k) * &witt::f(p, 2 * k - 1));
        qm = &qm + &(&witt::fd(p, 2 * k - 1) * &witt::fd(p, 2 * k));
    }
    for j in 1..=2 * p {
        bm = &bm + &(&witt::fd(p, j) * &witt::f(p, j));
    }
    let op_p = LinearOperator::left_mult(p, pm, -2)?.named("P");
    let op_q = LinearOperator::left_mult(p, qm, 2)?.named("Q");
    let beta = LinearOperator::left_mult(p, bm, 0)?.named("β");
    let h = h_from(p, &beta)?;
    let quarter = FieldElement::from_ratio(1, 4);
    let h2 = LinearOperator::combination(
        p,
        vec![(FieldElement::one(), h.then_after(&h)?), (FieldElement::from_int(2), h.clone())],
    )?;
    let casimir = LinearOperator::combination(
        p,
        vec![(FieldElement::one(), op_q.then_after(&op_p)?), (quarter, h2)],
    )?
    .named("C");
    let s = Arc::new(StandardOps { p: op_p, q: op_q, beta, casimir });
    ops.lock().unwrap().insert(p, s.clone());
    Ok(s)
}

fn h_from(p: usize, beta: &LinearOperator) -> Result<LinearOperator> {
    Ok(LinearOperator::combination(
        p,
        vec![(FieldElement::from_int(p as i64), LinearOperator::identity(p)), (FieldElement::from_int(-1), beta.clone())],
    )?
    .named("H"))
}

/// `P = f_2 f_1 + f_4 f_3 + ... + f_{2p} f_{2p-1}`.
pub fn op_p(p: usize) -> Result<LinearOperator> {
    Ok(standard(p)?.p.clone())
}

/// `Q = f†_1 f†_2 + ... + f†_{2p-1} f†_{2p}`.
pub fn op_q(p: usize) -> Result<LinearOperator> {
    Ok(standard(p)?.q.clone())
}

/// Spin-Euler operator `β = Σ f†_j f_j`.
pub fn op_beta(p: usize) -> Result<LinearOperator> {
    Ok(standard(p)?.beta.clone())
}

/// `H = p - β`.
pub fn op_h(p: usize) -> Result<LinearOperator> {
    h_from(p, &op_beta(p)?)
}

/// `C = QP + ¼ H (H + 2)`.
pub fn casimir(p: usize) -> Result<LinearOperator> {
    Ok(standard(p)?.casimir.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellLabel {
    pub r: usize,
    pub s: usize,
}

impl CellLabel {
    pub fn new(r: usize, s: usize) -> Self {
        CellLabel { r, s }
    }

    pub fn is_valid(&self, p: usize) -> bool {
        self.r <= 2 * p && self.s <= self.r.min(2 * p - self.r) && (self.r - self.s) % 2 == 0
    }

    /// Position of the cell in its row, counted from `S_s^s`.
    pub fn k(&self) -> usize {
        (self.r - self.s) / 2
    }

    fn validate(&self, p: usize) -> Result<()> {
        if p == 0 || !self.is_valid(p) {
            return Err(Error::InvalidArgument(format!("no cell S_{}^{} for p = {p}", self.s, self.r)));
        }
        Ok(())
    }
}

impl fmt::Display for CellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{}^{}", self.s, self.r)
    }
}

/// Cell indices present in `S^r`, largest first.
pub fn cells_in_degree(p: usize, r: usize) -> Vec<usize> {
    if r > 2 * p {
        return Vec::new();
    }
    let top = r.min(2 * p - r);
    (0..=top).rev().filter(|s| (top - s) % 2 == 0).collect()
}

/// All valid cell labels, ordered by degree then cell index.
pub fn all_cells(p: usize) -> Vec<CellLabel> {
    (0..=2 * p).flat_map(|r| cells_in_degree(p, r).into_iter().rev().map(move |s| CellLabel::new(r, s))).collect()
}

/// `C(2p, s) - C(2p, s - 2)`.
pub fn cell_dim(p: usize, s: usize) -> usize {
    binomial(2 * p, s) - if s >= 2 { binomial(2 * p, s - 2) } else { 0 }
}

/// `α_s^k = (k+1)(p-s-k)`, the scalar of `PQ` on `S_s^{s+2k}`.
pub fn alpha(p: usize, s: usize, k: usize) -> Rational {
    rat((k as i64 + 1) * (p as i64 - s as i64 - k as i64), 1)
}

/// `γ^r_{r-2k} = (k+1)! (p-r+k+1) ... (p-r+2k+1)`.
pub fn gamma_left(p: usize, r: usize, k: usize) -> Rational {
    let base = p as i64 - r as i64;
    let mut g: i64 = (1..=k as i64 + 1).product();
    for i in k as i64 + 1..=2 * k as i64 + 1 {
        g *= base + i;
    }
    rat(g, 1)
}

/// `γ^{2p-r}_{r-2k} = k! (p-r+k+2) ... (p-r+2k+1)`.
pub fn gamma_mirror(p: usize, r: usize, k: usize) -> Rational {
    let base = p as i64 - r as i64;
    let mut g: i64 = (1..=k as i64).product();
    for i in k as i64 + 2..=2 * k as i64 + 1 {
        g *= base + i;
    }
    rat(g, 1)
}

/// Casimir eigenvalue `c_s = ¼(p-s)(p+2-s)` on row s.
pub fn casimir_eigenvalue(p: usize, s: usize) -> Rational {
    rat((p as i64 - s as i64) * (p as i64 + 2 - s as i64), 4)
}

fn cell_cache() -> &'static Mutex<HashMap<(usize, CellLabel), Arc<SpinorSubspace>>> {
    static CELLS: OnceLock<Mutex<HashMap<(usize, CellLabel), Arc<SpinorSubspace>>>> = OnceLock::new();
    CELLS.get_or_init(Default::default)
}

/// Basis of `S_s^r`: `Q^k Ker P|_{S^s}` for `r <= p`, `P^k Ker Q|_{S^{2p-s}}` beyond.
pub fn cell_basis(p: usize, label: CellLabel) -> Result<Arc<SpinorSubspace>> {
    label.validate(p)?;
    if let Some(c) = cell_cache().lock().unwrap().get(&(p, label)) {
        return Ok(c.clone());
    }
    let ops = standard(p)?;
    let (start, climb, steps) = if label.r <= p {
        (label.s, &ops.q, label.k())
    } else {
        (2 * p - label.s, &ops.p, (2 * p - label.s - label.r) / 2)
    };
    let guard = if label.r <= p { &ops.p } else { &ops.q };
    let vectors = if guard.target_degree(start).is_some() {
        guard.matrix_on(start)?.kernel()
    } else {
        Matrix::identity(degree_dim(p, start as i64)).to_rows()
    };
    let mut vectors = vectors;
    let mut deg = start;
    for _ in 0..steps {
        let m = climb.matrix_on(deg)?;
        vectors = vectors.iter().map(|v| m.apply(v)).collect::<Result<_>>()?;
        deg = climb.target_degree(deg).expect("cell stays in range");
    }
    debug_assert_eq!(deg, label.r);
    let sub = SpinorSubspace::from_coords(p, SubspaceLabel::Cell { r: label.r, s: label.s }, vectors)?;
    if sub.dim() != cell_dim(p, label.s) {
        return Err(Error::InvalidArgument(format!("{label} has dimension {} instead of {}", sub.dim(), cell_dim(p, label.s))));
    }
    let sub = Arc::new(sub);
    cell_cache().lock().unwrap().insert((p, label), sub.clone());
    Ok(sub)
}

/// The cells of `S^r`, checked to form a direct sum filling `S^r`.
pub fn cell_decompose(p: usize, r: usize) -> Result<Vec<(CellLabel, Arc<SpinorSubspace>)>> {
    let full = witt::spinor_basis(p, r)?;
    let cells = cells_in_degree(p, r)
        .into_iter()
        .map(|s| Ok((CellLabel::new(r, s), cell_basis(p, CellLabel::new(r, s))?)))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<FieldElement>> = cells.iter().flat_map(|(_, c)| c.basis_coords().to_vec()).collect();
    let rank = Matrix::from_rows(rows)?.rank();
    if rank != full.dim() {
        return Err(Error::InvalidArgument(format!("cells of S^{r} have total rank {rank} instead of {}", full.dim())));
    }
    Ok(cells)
}

/// Scalar by which a degree-preserving operator acts on a subspace.
pub fn scalar_action(op: &LinearOperator, sub: &SpinorSubspace) -> Result<FieldElement> {
    if op.shift() != 0 {
        return Err(Error::NonScalarAction(format!("{} changes the degree", op.name())));
    }
    let m = op.matrix_on(sub.degree())?;
    let mut lambda: Option<FieldElement> = None;
    for v in sub.basis_coords() {
        let w = m.apply(v)?;
        let (i, lead) = v.iter().enumerate().find(|(_, x)| !x.is_zero()).expect("basis vector is nonzero");
        let l = w[i].div(lead)?;
        if v.iter().zip(&w).any(|(a, b)| &(a * &l) != b) {
            return Err(Error::NonScalarAction(format!("{} on {}", op.name(), sub.label)));
        }
        match &lambda {
            Some(x) if *x != l => return Err(Error::NonScalarAction(format!("{} on {}", op.name(), sub.label))),
            _ => lambda = Some(l),
        }
    }
    Ok(lambda.unwrap_or_default())
}

/// Scalars by which `PQ` and `QP` act on a cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PqScalars {
    pub pq: Rational,
    pub qp: Rational,
}

pub fn pq_scalar_check(p: usize, label: CellLabel) -> Result<PqScalars> {
    let cell = cell_basis(p, label)?;
    let pq = op_p(p)?.then_after(&op_q(p)?)?;
    let qp = op_q(p)?.then_after(&op_p(p)?)?;
    let to_rat = |x: FieldElement, what: &str| {
        x.to_rational().ok_or_else(|| Error::NonScalarAction(format!("{what} on {label} is not rational")))
    };
    Ok(PqScalars {
        pq: to_rat(scalar_action(&pq, &cell)?, "PQ")?,
        qp: to_rat(scalar_action(&qp, &cell)?, "QP")?,
    })
}

/// `Π_s^r = Π_{s'} (C - c_{s'}) / (c_s - c_{s'})` over the other cells of `S^r`,
/// extended by zero to the other degrees.
pub fn projector(p: usize, r: usize, s: usize) -> Result<LinearOperator> {
    CellLabel::new(r, s).validate(p)?;
    static PROJ: OnceLock<Mutex<HashMap<(usize, usize, usize), LinearOperator>>> = OnceLock::new();
    let cache = PROJ.get_or_init(Default::default);
    if let Some(op) = cache.lock().unwrap().get(&(p, r, s)) {
        return Ok(op.clone());
    }
    let c = casimir(p)?;
    let cs = casimir_eigenvalue(p, s);
    let mut chain = Vec::new();
    for other in cells_in_degree(p, r) {
        if other == s {
            continue;
        }
        let co = casimir_eigenvalue(p, other);
        let denom = FieldElement::from_rational(&cs - &co);
        let inv = denom.inv()?;
        let shifted = LinearOperator::combination(
            p,
            vec![(inv.clone(), c.clone()), (-(&inv * &FieldElement::from_rational(co)), LinearOperator::identity(p))],
        )?;
        chain.push(shifted);
    }
    let local = LinearOperator::compose(p, &chain)?;
    let op = LinearOperator::per_degree(p, 0, BTreeMap::from([(r, local)]), format!("Π_{s}^{r}"))?;
    cache.lock().unwrap().insert((p, r, s), op.clone());
    Ok(op)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellSign {
    Minus,
    Plus,
}

impl fmt::Display for CellSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellSign::Minus => "-",
            CellSign::Plus => "+",
        })
    }
}

/// Which closed form produces the `Minus` component: the one written for
/// source degrees `r <= p` or its mirror for degrees `r >= p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormulaSide {
    Left,
    Mirror,
}

/// Closed-form `Minus` component of `idx` on all of `S^r`, before restriction to the cell.
pub fn witt_minus_formula(p: usize, idx: WittIndex, label: CellLabel, side: FormulaSide) -> Result<LinearOperator> {
    label.validate(p)?;
    let ops = standard(p)?;
    let full = LinearOperator::witt(p, idx)?;
    let (r, s) = (label.r, label.s);
    let inv = |x: Rational| FieldElement::from_rational(x).inv();
    let chain = |a: &LinearOperator, na: usize, b: &LinearOperator, nb: usize| {
        LinearOperator::compose(p, &[vec![a.clone(); na], vec![b.clone(); nb], vec![full.clone()]].concat())
    };
    match side {
        FormulaSide::Left => {
            if r > p {
                return Err(Error::InvalidArgument(format!("left formula needs r <= p, got {label}")));
            }
            let k = (r - s) / 2;
            if idx.dagger {
                Ok(chain(&ops.q, k + 1, &ops.p, k + 1)?.scaled(inv(gamma_left(p, r, k))?))
            } else {
                Ok(chain(&ops.q, k, &ops.p, k)?.scaled(inv(gamma_mirror(p, r, k))?))
            }
        }
        FormulaSide::Mirror => {
            if r < p {
                return Err(Error::InvalidArgument(format!("mirror formula needs r >= p, got {label}")));
            }
            let rp = 2 * p - r;
            let k = (rp - s) / 2;
            if idx.dagger {
                Ok(chain(&ops.p, k, &ops.q, k)?.scaled(inv(gamma_mirror(p, rp, k))?))
            } else {
                Ok(chain(&ops.p, k + 1, &ops.q, k + 1)?.scaled(inv(gamma_left(p, rp, k))?))
            }
        }
    }
}

/// Part of the Witt vector `idx` that maps `S_s^r` into the cell with index
/// `s - 1` (`Minus`) or `s + 1` (`Plus`), as an operator vanishing off `S_s^r`.
pub fn witt_component(p: usize, idx: WittIndex, label: CellLabel, sign: CellSign) -> Result<LinearOperator> {
    let side = if label.r <= p { FormulaSide::Left } else { FormulaSide::Mirror };
    let formula = witt_minus_formula(p, idx, label, side)?;
    let full = LinearOperator::witt(p, idx)?;
    let restrict = projector(p, label.r, label.s)?;
    let minus = formula.then_after(&restrict)?;
    let name = format!("({idx})^{}_{}{sign}", label.r, label.s);
    Ok(match sign {
        CellSign::Minus => minus.named(name),
        CellSign::Plus => full.then_after(&restrict)?.minus(&minus)?.named(name),
    })
}

/// The same component summed over every cell of the spinor space.
pub fn witt_component_global(p: usize, idx: WittIndex, sign: CellSign) -> Result<LinearOperator> {
    static GLOBAL: OnceLock<Mutex<HashMap<(usize, WittIndex, CellSign), LinearOperator>>> = OnceLock::new();
    let cache = GLOBAL.get_or_init(Default::default);
    if let Some(op) = cache.lock().unwrap().get(&(p, idx, sign)) {
        return Ok(op.clone());
    }
    let mut parts = BTreeMap::new();
    for r in 0..=2 * p {
        let terms = cells_in_degree(p, r)
            .into_iter()
            .map(|s| Ok((FieldElement::one(), witt_component(p, idx, CellLabel::new(r, s), sign)?)))
            .collect::<Result<Vec<_>>>()?;
        let shift = if idx.dagger { 1 } else { -1 };
        let sum = if terms.is_empty() { LinearOperator::zero(p, shift) } else { LinearOperator::combination(p, terms)? };
        parts.insert(r, sum);
    }
    let op = LinearOperator::per_degree(p, if idx.dagger { 1 } else { -1 }, parts, format!("{idx}{sign}"))?;
    cache.lock().unwrap().insert((p, idx, sign), op.clone());
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_measures_degree() {
        let x = witt::spinor_monomial(2, 0b0101).unwrap();
        assert_eq!(op_beta(2).unwrap().apply(&x).unwrap(), x.scale(&FieldElement::from_int(2)));
    }

    #[test]
    fn q_on_vacuum_p1() {
        let i_ = witt::primitive_idempotent(1).unwrap();
        assert_eq!(op_q(1).unwrap().apply(&i_).unwrap(), witt::spinor_monomial(1, 0b11).unwrap());
        let i2 = witt::primitive_idempotent(2).unwrap();
        let pq = op_p(2).unwrap().then_after(&op_q(2).unwrap()).unwrap();
        assert_eq!(pq.apply(&i2).unwrap(), i2.scale(&FieldElement::from_int(2)));
    }

    #[test]
    fn cell_dimensions_p2() {
        assert_eq!(cell_basis(2, CellLabel::new(2, 0)).unwrap().dim(), 1);
        assert_eq!(cell_basis(2, CellLabel::new(2, 2)).unwrap().dim(), 5);
        assert!(cell_basis(2, CellLabel::new(2, 1)).is_err());
        assert!(cell_basis(2, CellLabel::new(3, 3)).is_err());
    }

    #[test]
    fn gamma_closed_forms() {
        assert_eq!(gamma_left(3, 2, 0), rat(2, 1));
        assert_eq!(gamma_mirror(3, 2, 0), rat(1, 1));
        assert_eq!(gamma_left(3, 2, 1), rat(24, 1));
    }
}
