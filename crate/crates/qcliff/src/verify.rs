//! Verification suite and table emitters behind the command-line tool.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use globset::Glob;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cells::{
    self, all_cells, cell_basis, cell_decompose, cells_in_degree, commutator_on, op_beta, op_p, op_q, projector,
    pq_scalar_check, CellLabel, LinearOperator,
};
use crate::clifford::Multivector;
use crate::dirac::{self, CliffordPolynomial, DiracKind, MonogenicSystem};
use crate::error::{Error, Result};
use crate::groups::{self, structure_triple};
use crate::lie::{self, AlgebraTag};
use crate::linalg::Matrix;
use crate::scalar::FieldElement;
use crate::witt::{self, binomial, f, fd, spinor_basis};

pub const REPORT_SCHEMA: u32 = 1;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub topic: String,
    pub status: Status,
    /// Empty on pass; a JSON counterexample or error message on failure.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub p_range: Vec<usize>,
    pub deep: bool,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.status == Status::Pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{tag} {:<40} {}", c.id, c.topic);
            if c.status == Status::Fail {
                let _ = writeln!(out, "     {}", c.detail);
            }
        }
        let passed = self.checks.iter().filter(|c| c.status == Status::Pass).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        out
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub p_max: usize,
    pub deep: bool,
    pub seed: u64,
    pub filter: Option<String>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { p_max: 2, deep: false, seed: DEFAULT_SEED, filter: None }
    }
}

#[derive(Debug)]
struct Fail(String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(format!("error: {e}"))
    }
}

type Outcome = std::result::Result<(), Fail>;

fn ensure(cond: bool, detail: impl FnOnce() -> serde_json::Value) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(Fail(detail().to_string()))
    }
}

type Runner = Box<dyn Fn(&mut ChaCha8Rng) -> Outcome + Send + Sync>;

struct Check {
    id: String,
    topic: &'static str,
    run: Runner,
}

fn check(id: String, topic: &'static str, run: impl Fn(&mut ChaCha8Rng) -> Outcome + Send + Sync + 'static) -> Check {
    Check { id, topic, run: Box::new(run) }
}

fn fe(n: i64) -> FieldElement {
    FieldElement::from_int(n)
}

fn id_seed(seed: u64, id: &str) -> u64 {
    // FNV-1a, so each check draws the same stream regardless of scheduling
    id.bytes().fold(0xcbf29ce484222325u64 ^ seed, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100000001b3))
}

fn witt_relations(p: usize) -> Outcome {
    let n = 2 * p;
    let one = Multivector::one(witt::algebra_dim(p));
    let anti = |a: &Multivector, b: &Multivector| (a * b).try_add(&(b * a));
    for j in 1..=n {
        for k in 1..=n {
            let ff = anti(&f(p, j), &f(p, k))?;
            let dd = anti(&fd(p, j), &fd(p, k))?;
            let fdd = anti(&f(p, j), &fd(p, k))?;
            let want = if j == k { one.clone() } else { Multivector::zero(one.dim()) };
            ensure(ff.is_zero(), || json!({"relation": "{f_j, f_k}", "j": j, "k": k, "value": ff}))?;
            ensure(dd.is_zero(), || json!({"relation": "{f†_j, f†_k}", "j": j, "k": k, "value": dd}))?;
            ensure(fdd == want, || json!({"relation": "{f_j, f†_k}", "j": j, "k": k, "value": fdd}))?;
        }
    }
    Ok(())
}

fn spinor_dims(p: usize) -> Outcome {
    let mut total = 0;
    for r in 0..=2 * p {
        let sub = spinor_basis(p, r)?;
        let rank = witt::multivector_rank(&sub.basis);
        ensure(rank == binomial(2 * p, r), || json!({"r": r, "rank": rank}))?;
        total += rank;
    }
    ensure(total == 1 << (2 * p), || json!({"total": total}))
}

/// Cell dimensions per degree in ascending `s`, as listed for p = 1, 2, 3.
fn listed_scheme(p: usize) -> Option<Vec<Vec<usize>>> {
    match p {
        1 => Some(vec![vec![1], vec![2], vec![1]]),
        2 => Some(vec![vec![1], vec![4], vec![1, 5], vec![4], vec![1]]),
        3 => Some(vec![vec![1], vec![6], vec![1, 14], vec![6, 14], vec![1, 14], vec![6], vec![1]]),
        _ => None,
    }
}

fn scheme_dims(p: usize) -> Result<Vec<Vec<usize>>> {
    (0..=2 * p)
        .map(|r| {
            let mut cells = cell_decompose(p, r)?;
            cells.sort_by_key(|(l, _)| l.s);
            Ok(cells.iter().map(|(_, c)| c.dim()).collect())
        })
        .collect()
}

fn cell_dims(p: usize) -> Outcome {
    for label in all_cells(p) {
        let dim = cell_basis(p, label)?.dim();
        let formula = binomial(2 * p, label.s) - if label.s >= 2 { binomial(2 * p, label.s - 2) } else { 0 };
        ensure(dim == formula && dim == cells::cell_dim(p, label.s), || {
            json!({"cell": label.to_string(), "basis_dim": dim, "formula": formula})
        })?;
    }
    Ok(())
}

fn cell_scheme(p: usize) -> Outcome {
    let dims = scheme_dims(p)?;
    for (r, row) in dims.iter().enumerate() {
        let sum: usize = row.iter().sum();
        ensure(sum == binomial(2 * p, r), || json!({"r": r, "cells": row}))?;
    }
    if let Some(want) = listed_scheme(p) {
        ensure(dims == want, || json!({"computed": dims, "listed": want}))?;
    }
    Ok(())
}

fn sl2_relations(p: usize) -> Outcome {
    let (pp, q, b) = (op_p(p)?, op_q(p)?, op_beta(p)?);
    for r in 0..=2 * p {
        let n = binomial(2 * p, r);
        let pq = commutator_on(&pp, &q, r)?;
        ensure(pq == Matrix::scalar(n, fe(p as i64 - r as i64)), || json!({"relation": "[P,Q] = p - β", "r": r}))?;
        let pb = commutator_on(&pp, &b, r)?;
        ensure(pb == pp.matrix_on(r)?.scale(&fe(2)), || json!({"relation": "[P,β] = 2P", "r": r}))?;
        let qb = commutator_on(&q, &b, r)?;
        ensure(qb == q.matrix_on(r)?.scale(&fe(-2)), || json!({"relation": "[Q,β] = -2Q", "r": r}))?;
    }
    Ok(())
}

fn alpha_scalars(p: usize) -> Outcome {
    let pq = op_p(p)?.then_after(&op_q(p)?)?;
    for label in all_cells(p) {
        let k = label.k() as i64;
        let n = (p - label.s) as i64;
        let want_pq = crate::scalar::rat((k + 1) * (n - k), 1);
        let want_qp = crate::scalar::rat(k * (n - k + 1), 1);
        let sc = pq_scalar_check(p, label)?;
        ensure(sc.pq == want_pq && sc.qp == want_qp, || {
            json!({"cell": label.to_string(), "pq": sc.pq.to_string(), "qp": sc.qp.to_string()})
        })?;
        if want_pq == crate::scalar::rat(0, 1) {
            continue;
        }
        let inv = FieldElement::from_rational(want_pq).inv()?;
        let m = pq.matrix_on(label.r)?;
        for v in cell_basis(p, label)?.basis_coords() {
            let w: Vec<FieldElement> = m.apply(v)?.iter().map(|x| x * &inv).collect();
            ensure(&w == v, || json!({"cell": label.to_string(), "relation": "P Q / α = 1"}))?;
        }
    }
    Ok(())
}

fn projector_algebra(p: usize) -> Outcome {
    for r in 0..=2 * p {
        let n = binomial(2 * p, r);
        let ss = cells_in_degree(p, r);
        let mut sum = Matrix::zeros(n, n);
        for &s in &ss {
            let a = projector(p, r, s)?.matrix_on(r)?;
            sum = sum.add(&a)?;
            for &t in &ss {
                let b = projector(p, r, t)?.matrix_on(r)?;
                let ab = a.mul(&b)?;
                let ok = if s == t { ab == *a } else { ab.is_zero() };
                ensure(ok, || json!({"r": r, "s": s, "t": t, "relation": "Π_s Π_t = δ Π_s"}))?;
            }
            ensure(a.rank() == cells::cell_dim(p, s), || json!({"r": r, "s": s, "rank": a.rank()}))?;
        }
        ensure(sum.is_identity(), || json!({"r": r, "relation": "Σ Π = 1"}))?;
    }
    Ok(())
}

fn qp_power(p: usize, j: u32) -> Result<LinearOperator> {
    op_q(p)?.pow(j).then_after(&op_p(p)?.pow(j))
}

fn falling(p: usize, from: usize, j: usize) -> i64 {
    // j! (p-from)(p-from-1)...(p-from-j+1)
    let fact: i64 = (1..=j as i64).product();
    fact * (0..j as i64).map(|i| p as i64 - from as i64 - i).product::<i64>()
}

fn projector_closed_forms(p: usize) -> Outcome {
    for j in 0..=p {
        let r = 2 * j;
        let closed = qp_power(p, j as u32)?.scaled(FieldElement::from_ratio(1, falling(p, 0, j)));
        ensure(projector(p, r, 0)?.equals_on(&closed, r)?, || json!({"projector": format!("Π_0^{r}")}))?;
    }
    for j in 0..p {
        let r = 2 * j + 1;
        let closed = qp_power(p, j as u32)?.scaled(FieldElement::from_ratio(1, falling(p, 1, j)));
        ensure(projector(p, r, 1)?.equals_on(&closed, r)?, || json!({"projector": format!("Π_1^{r}")}))?;
    }
    Ok(())
}

fn random_decomposition(p: usize, rng: &mut ChaCha8Rng) -> Outcome {
    for r in 0..=2 * p {
        let x = witt::random_spinor(p, r, rng)?;
        let mut sum = Multivector::zero(x.dim());
        for s in cells_in_degree(p, r) {
            let part = projector(p, r, s)?.apply(&x)?;
            ensure(cell_basis(p, CellLabel::new(r, s))?.contains(&part)?, || json!({"r": r, "s": s, "x": x}))?;
            sum = sum.try_add(&part)?;
        }
        ensure(sum == x, || json!({"r": r, "x": x}))?;
    }
    Ok(())
}

fn sp_invariance(p: usize) -> Outcome {
    let basis = lie::algebra_basis(p, AlgebraTag::Sp2p)?;
    let mut ops = vec![op_p(p)?, op_q(p)?];
    for label in all_cells(p) {
        ops.push(projector(p, label.r, label.s)?);
    }
    for (h, name) in basis.elements.iter().zip(&basis.labels) {
        let hop = LinearOperator::left_mult(p, h.clone(), 0)?;
        for op in &ops {
            ensure(hop.commutator(op)?.is_zero()?, || json!({"bivector": name, "operator": op.name()}))?;
        }
    }
    for label in all_cells(p) {
        ensure(lie::cell_invariance(p, label)?, || json!({"cell": label.to_string()}))?;
    }
    Ok(())
}

fn weyl(p: usize) -> Outcome {
    for r in 0..=p {
        let w = lie::weyl_dim_sp(p, r)?;
        let k = cell_basis(p, CellLabel::new(r, r))?.dim();
        ensure(w == k, || json!({"r": r, "weyl": w, "kernel": k}))?;
    }
    Ok(())
}

fn spin_exponentials(p: usize) -> Outcome {
    let si = groups::spin_s_i(p)?;
    let sj = groups::spin_s_j(p)?;
    ensure(groups::exp_pi4_bivector(4 * p, &groups::sigma_i(p))? == si, || json!({"element": "s_I"}))?;
    ensure(groups::exp_pi4_bivector(4 * p, &groups::sigma_j(p))? == sj, || json!({"element": "s_J"}))?;
    let t = structure_triple(p)?;
    let ai = groups::double_cover_matrix(&si)?;
    let aj = groups::double_cover_matrix(&sj)?;
    ensure(ai == t.i, || json!({"element": "s_I", "matrix": ai.to_rows()}))?;
    ensure(aj == t.j, || json!({"element": "s_J", "matrix": aj.to_rows()}))?;
    Ok(())
}

fn s_i_action(p: usize) -> Outcome {
    let si = groups::spin_s_i(p)?;
    let t = structure_triple(p)?;
    let n = 4 * p;
    let x: Vec<FieldElement> = (1..=n as i64).map(|a| fe(a * a - 3)).collect();
    let image = si.conjugate(&Multivector::vector(n, &x)?)?.vector_coords()?;
    let want = groups::twist_row(&t.i, &x)?;
    ensure(image == want, || json!({"x": x, "image": image}))
}

fn s_a_chain() -> Outcome {
    let s_a = groups::spin_s_a()?;
    ensure(groups::exp_pi4_bivector(4, &groups::sigma_a())? == s_a, || json!({"step": "exp σ_A = s_A"}))?;
    let a = Matrix::from_int_rows(&[&[0, 0, 0, 1], &[0, 0, -1, 0], &[0, 1, 0, 0], &[-1, 0, 0, 0]]);
    ensure(groups::double_cover_matrix(&s_a)? == a, || json!({"step": "double cover of s_A"}))?;
    let k = groups::QMatrix::from_rows(vec![vec![groups::Quaternion::unit_k()]])?;
    ensure(groups::exp_pi4_quaternion_structure(2, &k)? == k, || json!({"step": "exp c = k"}))?;
    let b = groups::psi_embed(&k)?;
    ensure(groups::exp_pi4_complex_structure(2, &b)? == b, || json!({"step": "exp b = ψ(k)"}))?;
    ensure(groups::phi_embed(&b)? == a, || json!({"step": "φ(b) = A"}))?;
    ensure(groups::exp_pi4_complex_structure(2, &a)? == a, || json!({"step": "exp a = A"}))?;
    let skew = groups::bivector_to_skew(&groups::sigma_a().over_pi(4)?)?;
    ensure(skew == a.scale(&FieldElement::from_ratio(1, 2)), || json!({"step": "σ_A ↔ a"}))?;
    ensure(
        groups::subgroup_membership(groups::GroupElement::Spin(&s_a), groups::Subgroup::SpinQ)?,
        || json!({"step": "s_A in Spin_Q"}),
    )
}

fn lie_bases(p: usize) -> Outcome {
    for tag in [AlgebraTag::SpinI, AlgebraTag::SpinQ, AlgebraTag::Sl2p, AlgebraTag::Sp2p, AlgebraTag::SlpInside] {
        let b = lie::algebra_basis(p, tag)?;
        ensure(b.len() == tag.basis_len(p), || json!({"algebra": tag.to_string(), "len": b.len()}))?;
        ensure(lie::is_linearly_independent(&b), || json!({"algebra": tag.to_string(), "relation": "independent"}))?;
        ensure(lie::closure_check(&b)?, || json!({"algebra": tag.to_string(), "relation": "closed"}))?;
    }
    Ok(())
}

fn conversion() -> Outcome {
    let entries = lie::conversion_check()?;
    ensure(entries.len() == 10, || json!({"entries": entries.len()}))?;
    for e in entries {
        ensure(e.equal, || json!({"identity": e.label, "witt": e.witt, "e_form": e.e_form}))?;
    }
    Ok(())
}

fn highest_weights(p: usize) -> Outcome {
    for r in 0..=p {
        for rep in lie::highest_weight_cell_check(p, r)? {
            ensure(rep.ok(), || json!({"r": r, "a": rep.a, "b": rep.b, "weight": rep.weight.to_string()}))?;
        }
    }
    Ok(())
}

fn dirac_identities(p: usize, degree: u32) -> Outcome {
    for c in dirac::operator_identity_suite(p, degree)? {
        ensure(c.ok(), || json!({"identity": c.name, "symbol": c.symbol_equal, "applied": c.applied_equal}))?;
    }
    for c in dirac::second_order_suite(p, degree)? {
        ensure(c.ok(), || json!({"identity": c.name}))?;
    }
    Ok(())
}

fn vacuum_poly(p: usize, scalar: CliffordPolynomial, set: u32) -> Result<CliffordPolynomial> {
    scalar.right_mul(&witt::spinor_monomial(p, set)?)
}

fn dirac_examples(p: usize) -> Outcome {
    let x = CliffordPolynomial::clifford_variable(p)?;
    let dx = dirac::apply_dirac(DiracKind::D, &x)?;
    let want = CliffordPolynomial::constant(p, Multivector::one(4 * p).scale(&fe(-4 * p as i64)))?;
    ensure(dx == want, || json!({"relation": "D X = -4p", "got": dx}))?;

    let g = vacuum_poly(p, CliffordPolynomial::zbar(p, 1)?, 0)?;
    ensure(dirac::is_monogenic(&g, MonogenicSystem::Hermitian)?.monogenic, || json!({"F": g, "system": "hermitian"}))?;
    let v = dirac::check_operators(MonogenicSystem::Quaternionic.hermitian_operators(), &g)?;
    let witness = CliffordPolynomial::constant(p, -&witt::spinor_monomial(p, 0b10)?)?;
    ensure(v.witness == Some((DiracKind::DzJDag, witness)), || json!({"F": g, "verdict": v}))?;
    ensure(!dirac::is_monogenic(&g, MonogenicSystem::Quaternionic)?.monogenic, || json!({"F": g}))?;

    let h = vacuum_poly(p, CliffordPolynomial::var(p, 1)?, 0)?;
    ensure(!dirac::is_monogenic(&h, MonogenicSystem::Euclidean)?.monogenic, || json!({"F": h}))?;

    let z = vacuum_poly(p, CliffordPolynomial::z(p, 1)?, 0)?;
    let dzz = dirac::apply_dirac(DiracKind::Dz, &z)?;
    ensure(dzz == CliffordPolynomial::constant(p, witt::spinor_monomial(p, 1)?)?, || json!({"got": dzz}))
}

fn componentwise(p: usize) -> Outcome {
    let pos = vacuum_poly(p, CliffordPolynomial::zbar(p, 1)?, 0)?.add(&vacuum_poly(p, CliffordPolynomial::z(p, 1)?, 0b11)?)?;
    let neg = vacuum_poly(p, CliffordPolynomial::zbar(p, 1)?, 0)?.add(&vacuum_poly(p, CliffordPolynomial::zbar(p, 2)?, 0b11)?)?;
    for (g, expect) in [(pos, true), (neg, false)] {
        let rep = dirac::hermitian_componentwise_check(&g)?;
        ensure(rep.consistent() && rep.hermitian == expect, || json!({"F": g, "hermitian": rep.hermitian}))?;
    }
    Ok(())
}

fn random_kernel(p: usize, rng: &mut ChaCha8Rng) -> Outcome {
    use rand::Rng;
    for (system, weaker) in [
        (MonogenicSystem::Quaternionic, MonogenicSystem::Hermitian),
        (MonogenicSystem::Hermitian, MonogenicSystem::Euclidean),
    ] {
        for d in 1..=2 {
            let ker = dirac::monogenic_kernel(p, system, d)?;
            let mut g = CliffordPolynomial::zero(p);
            for b in &ker {
                g = g.add(&b.scale(&fe(rng.gen_range(-3..=3))))?;
            }
            ensure(dirac::is_monogenic(&g, system)?.monogenic, || json!({"F": g, "system": system.to_string()}))?;
            ensure(dirac::is_monogenic(&g, weaker)?.monogenic, || json!({"F": g, "system": weaker.to_string()}))?;
            ensure(dirac::hermitian_componentwise_check(&g)?.consistent(), || json!({"F": g}))?;
        }
    }
    Ok(())
}

fn registry(opts: &SuiteOptions) -> Vec<Check> {
    let mut out = Vec::new();
    for p in 1..=opts.p_max {
        let deep_only = p >= 4;
        out.push(check(format!("spinor.dims.p{p}"), "spinor space dimensions", move |_| spinor_dims(p)));
        out.push(check(format!("cells.dims.p{p}"), "symplectic cell dimensions", move |_| cell_dims(p)));
        out.push(check(format!("cells.scheme.p{p}"), "triangular scheme", move |_| cell_scheme(p)));
        out.push(check(format!("weyl.p{p}"), "Weyl dimension of the cells", move |_| weyl(p)));
        if deep_only {
            continue;
        }
        out.push(check(format!("witt.relations.p{p}"), "Witt basis relations", move |_| witt_relations(p)));
        out.push(check(format!("cells.sl2.p{p}"), "sl2 relations of P, Q, β", move |_| sl2_relations(p)));
        out.push(check(format!("cells.alpha.p{p}"), "PQ and QP scalars on cells", move |_| alpha_scalars(p)));
        out.push(check(format!("cells.projectors.p{p}"), "Casimir projectors", move |_| projector_algebra(p)));
        out.push(check(format!("cells.closed_forms.p{p}"), "closed-form projectors", move |_| projector_closed_forms(p)));
        out.push(check(format!("cells.random_decomposition.p{p}"), "random spinors split over cells", move |rng| {
            random_decomposition(p, rng)
        }));
        if p <= 2 || opts.deep {
            out.push(check(format!("sp.invariance.p{p}"), "sp invariance of P, Q, projectors, cells", move |_| {
                sp_invariance(p)
            }));
        }
        out.push(check(format!("groups.exp.p{p}"), "s_I and s_J as exponentials", move |_| spin_exponentials(p)));
        out.push(check(format!("groups.s_i_action.p{p}"), "s_I action on vectors", move |_| s_i_action(p)));
        out.push(check(format!("lie.bases.p{p}"), "Lie algebra bases", move |_| lie_bases(p)));
        out.push(check(format!("lie.highest_weights.p{p}"), "highest weight vectors", move |_| highest_weights(p)));
        let degree = if p <= 2 { 3 } else { 1 };
        out.push(check(format!("dirac.identities.p{p}"), "Dirac operator dictionary", move |_| {
            dirac_identities(p, degree)
        }));
        out.push(check(format!("dirac.examples.p{p}"), "monogenic examples", move |_| dirac_examples(p)));
        if p <= 2 {
            out.push(check(format!("dirac.componentwise.p{p}"), "componentwise hermitian monogenicity", move |_| {
                componentwise(p)
            }));
        }
        if p == 1 {
            out.push(check("groups.s_a_chain.p1".into(), "s_A worked chain", |_| s_a_chain()));
            out.push(check("dirac.random_kernel.p1".into(), "random monogenic polynomials", |rng| random_kernel(1, rng)));
        }
        if p == 2 {
            out.push(check("lie.conversion.p2".into(), "sp4 Witt and e-form conversions", |_| conversion()));
        }
    }
    out
}

pub fn run_suite(opts: &SuiteOptions) -> Result<VerificationReport> {
    if opts.p_max == 0 || opts.p_max > 4 {
        return Err(Error::InvalidArgument(format!("p_max = {} outside 1..=4", opts.p_max)));
    }
    if opts.p_max == 4 && !opts.deep {
        return Err(Error::InvalidArgument("p = 4 needs --deep".into()));
    }
    let matcher = match &opts.filter {
        Some(g) => Some(Glob::new(g).map_err(|e| Error::Parse(e.to_string()))?.compile_matcher()),
        None => None,
    };
    let start = Instant::now();
    let checks: Vec<Check> =
        registry(opts).into_iter().filter(|c| matcher.as_ref().map_or(true, |m| m.is_match(&c.id))).collect();
    let mut results: Vec<CheckResult> = checks
        .par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(id_seed(opts.seed, &c.id));
            let (status, detail) = match (c.run)(&mut rng) {
                Ok(()) => (Status::Pass, String::new()),
                Err(Fail(d)) => (Status::Fail, d),
            };
            CheckResult { id: c.id.clone(), topic: c.topic.to_string(), status, detail }
        })
        .collect();
    results.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(VerificationReport {
        schema: REPORT_SCHEMA,
        p_range: (1..=opts.p_max).collect(),
        deep: opts.deep,
        seed: opts.seed,
        checks: results,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    Cells,
    Dims,
    LiealgLedger,
}

impl std::str::FromStr for TableKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cells" => Ok(TableKind::Cells),
            "dims" => Ok(TableKind::Dims),
            "liealg-ledger" => Ok(TableKind::LiealgLedger),
            _ => Err(Error::Parse(format!("unknown table {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "latex" => Ok(Format::Latex),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

pub fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap_or(0) as usize]).collect()
}

pub fn subscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap_or(0) as usize]).collect()
}

#[derive(Serialize)]
struct CellJson {
    r: usize,
    s: usize,
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<Multivector>>,
}

/// One row per cell, ordered by degree then `s`.
pub fn cell_table(p: usize, only_r: Option<usize>, format: Format, with_bases: bool) -> Result<String> {
    witt::check_p(p)?;
    if let Some(r) = only_r {
        if r > 2 * p {
            return Err(Error::IndexOutOfRange(format!("r = {r} for p = {p}")));
        }
    }
    let mut rows = Vec::new();
    for r in 0..=2 * p {
        if only_r.is_some_and(|x| x != r) {
            continue;
        }
        let mut cells = cell_decompose(p, r)?;
        cells.sort_by_key(|(l, _)| l.s);
        for (l, c) in cells {
            let basis = (with_bases || format == Format::Json).then(|| c.basis.clone());
            rows.push(CellJson { r: l.r, s: l.s, dim: c.dim(), basis });
        }
    }
    Ok(match format {
        Format::Json => {
            serde_json::to_string_pretty(&json!({"p": p, "cells": rows})).expect("serializable") + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            for c in &rows {
                let _ = writeln!(out, "𝕊{}{}: dim {}", subscript(c.s), superscript(c.r), c.dim);
                for b in c.basis.iter().flatten() {
                    let _ = writeln!(out, "    {}", spinor_words(p, b)?);
                }
            }
            out
        }
        Format::Latex => {
            let mut out = String::from("\\begin{tabular}{ccc}\n$r$ & $s$ & $\\dim \\mathbb{S}_s^r$ \\\\\n\\hline\n");
            for c in &rows {
                let _ = writeln!(out, "{} & {} & {} \\\\", c.r, c.s, c.dim);
            }
            out.push_str("\\end{tabular}\n");
            out
        }
    })
}

/// A spinor written in Witt words, e.g. `(1) f†1 f†2 I + (-1) f†3 f†4 I`.
pub fn spinor_words(p: usize, x: &Multivector) -> Result<String> {
    let coeffs = witt::spinor_decompose(p, x)?;
    if coeffs.is_empty() {
        return Ok("0".into());
    }
    let mut sets: Vec<(u32, FieldElement)> = coeffs.into_iter().collect();
    sets.sort_by_key(|(s, _)| (s.count_ones(), witt::subset_indices(*s)));
    Ok(sets.iter().map(|(s, c)| format!("({c}) {}", witt::monomial_label(*s))).collect::<Vec<_>>().join(" + "))
}

pub fn dims_table(p: usize, format: Format) -> Result<String> {
    witt::check_p(p)?;
    let dims = scheme_dims(p)?;
    let cell_row: Vec<usize> = (0..=p).map(|s| cells::cell_dim(p, s)).collect();
    Ok(match format {
        Format::Json => {
            let degrees: Vec<_> = dims
                .iter()
                .enumerate()
                .map(|(r, row)| json!({"r": r, "dim": binomial(2 * p, r), "cells": row}))
                .collect();
            serde_json::to_string_pretty(&json!({"p": p, "degrees": degrees, "cell_dims": cell_row})).expect("serializable")
                + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            for (r, row) in dims.iter().enumerate() {
                let parts: Vec<String> = row.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "𝕊{}: {} = {}", superscript(r), binomial(2 * p, r), parts.join(" + "));
            }
            let parts: Vec<String> = cell_row.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "cells 𝕊ₛˢ, s = 0..{p}: {}", parts.join(", "));
            out
        }
        Format::Latex => {
            let mut out = String::from("\\begin{tabular}{cl}\n$r$ & $\\dim \\mathbb{S}^r$ \\\\\n\\hline\n");
            for (r, row) in dims.iter().enumerate() {
                let parts: Vec<String> = row.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "{r} & ${} = {}$ \\\\", binomial(2 * p, r), parts.join(" + "));
            }
            out.push_str("\\end{tabular}\n");
            out
        }
    })
}

pub fn ledger_table(p: usize, format: Format) -> Result<String> {
    witt::check_p(p)?;
    let ledger = lie::dimension_ledger(p);
    Ok(match format {
        Format::Json => {
            let rows: Vec<_> = ledger.iter().map(|(n, d)| json!({"space": n, "real_dim": d})).collect();
            serde_json::to_string_pretty(&json!({"p": p, "ledger": rows})).expect("serializable") + "\n"
        }
        Format::Text => ledger.iter().map(|(n, d)| format!("{n}: {d}\n")).collect(),
        Format::Latex => {
            let mut out = String::from("\\begin{tabular}{lc}\nspace & real dim \\\\\n\\hline\n");
            for (n, d) in &ledger {
                let _ = writeln!(out, "\\verb|{n}| & {d} \\\\");
            }
            out.push_str("\\end{tabular}\n");
            out
        }
    })
}

pub fn emit_table(p: usize, what: TableKind, format: Format) -> Result<String> {
    match what {
        TableKind::Cells => cell_table(p, None, format, false),
        TableKind::Dims => dims_table(p, format),
        TableKind::LiealgLedger => ledger_table(p, format),
    }
}
