use proptest::prelude::*;
use qcliff::cells::*;
use qcliff::linalg::Matrix;
use qcliff::scalar::rat;
use qcliff::witt::{self, WittIndex};
use qcliff::{FieldElement, Multivector, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fe(n: i64) -> FieldElement {
    FieldElement::from_int(n)
}

fn ratfe(n: i64, d: i64) -> FieldElement {
    FieldElement::from_ratio(n, d)
}

#[test]
fn sl2_relations() {
    for p in 1..=3 {
        let (pp, q, b) = (op_p(p).unwrap(), op_q(p).unwrap(), op_beta(p).unwrap());
        for r in 0..=2 * p {
            let n = witt::binomial(2 * p, r);
            let pq = commutator_on(&pp, &q, r).unwrap();
            assert_eq!(pq, Matrix::scalar(n, fe(p as i64 - r as i64)), "[P,Q] p={p} r={r}");
            let pb = commutator_on(&pp, &b, r).unwrap();
            assert_eq!(pb, pp.matrix_on(r).unwrap().scale(&fe(2)), "[P,β] p={p} r={r}");
            let qb = commutator_on(&q, &b, r).unwrap();
            assert_eq!(qb, q.matrix_on(r).unwrap().scale(&fe(-2)), "[Q,β] p={p} r={r}");
            assert_eq!(*b.matrix_on(r).unwrap(), Matrix::scalar(n, fe(r as i64)));
        }
    }
}

#[test]
fn listed_dimensions() {
    let d = |p, r, s| cell_basis(p, CellLabel::new(r, s)).unwrap().dim();
    assert_eq!(d(2, 2, 0), 1);
    assert_eq!(d(2, 2, 2), 5);
    assert_eq!(d(3, 3, 3), 14);
    assert_eq!(d(3, 2, 2), 14);
    assert_eq!(d(3, 4, 2), 14);
    assert_eq!(witt::spinor_basis(2, 2).unwrap().dim(), 6);
    assert_eq!(witt::spinor_basis(3, 1).unwrap().dim(), 6);
}

#[test]
fn decompositions_fill_each_degree() {
    let dims = |p, r| cell_decompose(p, r).unwrap().iter().map(|(l, c)| (l.s, c.dim())).collect::<Vec<_>>();
    assert_eq!(dims(2, 2), vec![(2, 5), (0, 1)]);
    assert_eq!(dims(3, 3), vec![(3, 14), (1, 6)]);
    assert_eq!(dims(1, 1), vec![(1, 2)]);
    for p in 1..=3 {
        for r in 0..=2 * p {
            let total: usize = cell_decompose(p, r).unwrap().iter().map(|(_, c)| c.dim()).sum();
            assert_eq!(total, witt::binomial(2 * p, r));
        }
    }
}

#[test]
fn degree_two_cell_p3_is_q_of_vacuum() {
    let cell = cell_basis(3, CellLabel::new(2, 0)).unwrap();
    let expected = &(&witt::spinor_monomial(3, 0b000011).unwrap() + &witt::spinor_monomial(3, 0b001100).unwrap())
        + &witt::spinor_monomial(3, 0b110000).unwrap();
    assert_eq!(cell.dim(), 1);
    assert!(cell.contains(&expected).unwrap());
}

#[test]
fn degree_four_cell_p3_spans_q_image() {
    // the degree-4 cell with index 2 is Q applied to the degree-2 cell with index 2
    let q = op_q(3).unwrap();
    let lower = cell_basis(3, CellLabel::new(2, 2)).unwrap();
    let upper = cell_basis(3, CellLabel::new(4, 2)).unwrap();
    assert_eq!(upper.dim(), 14);
    for b in &lower.basis {
        assert!(upper.contains(&q.apply(b).unwrap()).unwrap());
    }
    let p_op = op_p(3).unwrap();
    for b in &upper.basis {
        assert!(q.apply(b).unwrap().is_zero(), "degree-4 cell lies in Ker Q");
        assert!(lower.contains(&p_op.apply(b).unwrap()).unwrap());
    }
}

/// `α` by the row length of the sl2 string: PQ on the k-th vector of a
/// string of length n+1 is (k+1)(n-k).
fn alpha_oracle(p: usize, s: usize, k: i64) -> Rational {
    let n = (p - s) as i64;
    rat((k + 1) * (n - k), 1)
}

#[test]
fn pq_scalars_on_every_cell() {
    for p in 1..=3 {
        for label in all_cells(p) {
            let sc = pq_scalar_check(p, label).unwrap();
            let k = label.k() as i64;
            assert_eq!(sc.pq, alpha_oracle(p, label.s, k), "PQ on {label} p={p}");
            assert_eq!(sc.qp, alpha_oracle(p, label.s, k - 1), "QP on {label} p={p}");
            assert_eq!(sc.pq, alpha(p, label.s, label.k()));
        }
    }
    assert_eq!(pq_scalar_check(2, CellLabel::new(0, 0)).unwrap().pq, rat(2, 1));
    assert_eq!(pq_scalar_check(3, CellLabel::new(3, 1)).unwrap().qp, rat(2, 1));
}

#[test]
fn alpha_symmetry() {
    for p in 1..=4usize {
        for s in 0..p {
            for k in 0..(p - s) {
                assert_eq!(alpha(p, s, k), alpha(p, s, p - s - k - 1));
            }
        }
    }
}

#[test]
fn pq_inverts_on_cells() {
    for p in 1..=3 {
        let pq = op_p(p).unwrap().then_after(&op_q(p).unwrap()).unwrap();
        for label in all_cells(p) {
            let a = alpha(p, label.s, label.k());
            if a == rat(0, 1) {
                continue;
            }
            let cell = cell_basis(p, label).unwrap();
            let m = pq.matrix_on(label.r).unwrap();
            let inv = FieldElement::from_rational(a).inv().unwrap();
            for v in cell.basis_coords() {
                let w: Vec<FieldElement> = m.apply(v).unwrap().iter().map(|x| x * &inv).collect();
                assert_eq!(&w, v);
            }
        }
    }
}

#[test]
fn kernels_are_trivial_off_the_middle() {
    for p in 1..=3 {
        let (pp, q) = (op_p(p).unwrap(), op_q(p).unwrap());
        for r in 0..=2 * p {
            let n = witt::binomial(2 * p, r);
            if r > p {
                assert_eq!(pp.matrix_on(r).unwrap().rank(), n);
            }
            if r < p {
                assert_eq!(q.matrix_on(r).unwrap().rank(), n);
            }
        }
        let kp = Matrix::from_rows(pp.matrix_on(p).unwrap().kernel()).unwrap();
        let kq = Matrix::from_rows(q.matrix_on(p).unwrap().kernel()).unwrap();
        let both = Matrix::from_rows([kp.to_rows(), kq.to_rows()].concat()).unwrap();
        assert_eq!(kp.rank(), kq.rank());
        assert_eq!(both.rank(), kp.rank());
    }
}

#[test]
fn casimir_on_rows() {
    for p in 1..=3 {
        let c = casimir(p).unwrap();
        for label in all_cells(p) {
            let cell = cell_basis(p, label).unwrap();
            let lambda = scalar_action(&c, &cell).unwrap();
            let want = rat((p as i64 - label.s as i64) * (p as i64 + 2 - label.s as i64), 4);
            assert_eq!(lambda, FieldElement::from_rational(want), "C on {label} p={p}");
        }
    }
    assert_eq!(casimir_eigenvalue(2, 0), rat(2, 1));
    assert_eq!(casimir_eigenvalue(2, 2), rat(0, 1));
}

#[test]
fn projector_algebra() {
    for p in 1..=3 {
        for r in 0..=2 * p {
            let n = witt::binomial(2 * p, r);
            let ss = cells_in_degree(p, r);
            let mut sum = Matrix::zeros(n, n);
            for &s in &ss {
                let a = projector(p, r, s).unwrap().matrix_on(r).unwrap();
                sum = sum.add(&a).unwrap();
                for &t in &ss {
                    let b = projector(p, r, t).unwrap().matrix_on(r).unwrap();
                    let ab = a.mul(&b).unwrap();
                    if s == t {
                        assert_eq!(ab, *a);
                    } else {
                        assert!(ab.is_zero());
                    }
                }
                let cell = cell_basis(p, CellLabel::new(r, s)).unwrap();
                for v in cell.basis_coords() {
                    assert_eq!(&a.apply(v).unwrap(), v);
                }
                assert_eq!(a.rank(), cell.dim());
            }
            assert!(sum.is_identity());
        }
    }
}

fn qp_power(p: usize, j: u32) -> qcliff::cells::LinearOperator {
    op_q(p).unwrap().pow(j).then_after(&op_p(p).unwrap().pow(j)).unwrap()
}

#[test]
fn projector_closed_forms() {
    for p in 2..=4usize {
        let pi02 = projector(p, 2, 0).unwrap();
        assert!(pi02.equals_on(&qp_power(p, 1).scaled(ratfe(1, p as i64)), 2).unwrap());
        if p >= 3 {
            let pi13 = projector(p, 3, 1).unwrap();
            assert!(pi13.equals_on(&qp_power(p, 1).scaled(ratfe(1, p as i64 - 1)), 3).unwrap());
        }
        for j in 1..=p {
            let r = 2 * j;
            if r > p {
                break;
            }
            let mut denom: i64 = (1..=j as i64).product();
            for i in 0..j as i64 {
                denom *= p as i64 - i;
            }
            let closed = qp_power(p, j as u32).scaled(ratfe(1, denom));
            assert!(projector(p, r, 0).unwrap().equals_on(&closed, r).unwrap(), "p={p} j={j}");
        }
    }
}

#[test]
fn witt_components_match_projected_multiplication() {
    for p in 1..=3 {
        for j in 1..=2 * p {
            for dagger in [false, true] {
                let idx = WittIndex { j, dagger };
                let full = qcliff::cells::LinearOperator::witt(p, idx).unwrap();
                for label in all_cells(p) {
                    let src = projector(p, label.r, label.s).unwrap();
                    let Some(t) = full.target_degree(label.r) else { continue };
                    let minus = witt_component(p, idx, label, CellSign::Minus).unwrap();
                    let plus = witt_component(p, idx, label, CellSign::Plus).unwrap();
                    for (sign, op, ts) in [(CellSign::Minus, &minus, label.s.wrapping_sub(1)), (CellSign::Plus, &plus, label.s + 1)] {
                        let oracle = if CellLabel::new(t, ts).is_valid(p) {
                            projector(p, t, ts).unwrap().then_after(&full).unwrap().then_after(&src).unwrap()
                        } else {
                            qcliff::cells::LinearOperator::zero(p, full.shift())
                        };
                        assert!(op.equals_on(&oracle, label.r).unwrap(), "{idx} {sign} on {label} p={p}");
                    }
                    let sum = minus.plus(&plus).unwrap();
                    assert!(sum.equals_on(&full.then_after(&src).unwrap(), label.r).unwrap());
                }
            }
        }
    }
}

#[test]
fn both_closed_forms_agree_in_the_middle() {
    for p in 1..=3 {
        for s in cells_in_degree(p, p) {
            let label = CellLabel::new(p, s);
            let restrict = projector(p, p, s).unwrap();
            for j in 1..=2 * p {
                for dagger in [false, true] {
                    let idx = WittIndex { j, dagger };
                    let l = witt_minus_formula(p, idx, label, FormulaSide::Left).unwrap().then_after(&restrict).unwrap();
                    let m = witt_minus_formula(p, idx, label, FormulaSide::Mirror).unwrap().then_after(&restrict).unwrap();
                    assert!(l.equals_on(&m, p).unwrap(), "{idx} on {label}");
                }
            }
        }
    }
}

/// `γ` as the product of the `α` values it telescopes.
#[test]
fn gamma_matches_alpha_products() {
    for p in 1..=5usize {
        for r in 0..=p {
            for k in 0..=r / 2 {
                let s = r - 2 * k;
                if s == 0 {
                    continue;
                }
                let left: Rational = (0..=k).map(|i| alpha_oracle(p, s - 1, i as i64)).product();
                let mirror: Rational = (0..k).map(|i| alpha_oracle(p, s - 1, i as i64)).product();
                assert_eq!(gamma_left(p, r, k), left, "p={p} r={r} k={k}");
                assert_eq!(gamma_mirror(p, r, k), mirror, "p={p} r={r} k={k}");
            }
        }
    }
}

#[test]
fn witt_component_images_land_in_cells() {
    for p in 2..=3 {
        for label in all_cells(p) {
            let cell = cell_basis(p, label).unwrap();
            for j in 1..=2 * p {
                let idx = WittIndex::fd(j);
                let op = witt_component(p, idx, label, CellSign::Minus).unwrap();
                let Some(t) = op.target_degree(label.r) else { continue };
                for b in &cell.basis {
                    let y = op.apply(b).unwrap();
                    if y.is_zero() {
                        continue;
                    }
                    let target = cell_basis(p, CellLabel::new(t, label.s - 1)).unwrap();
                    assert!(target.contains(&y).unwrap());
                }
            }
        }
    }
}

fn comp(p: usize, j: usize, dagger: bool, sign: CellSign) -> qcliff::cells::LinearOperator {
    witt_component_global(p, WittIndex { j, dagger }, sign).unwrap()
}

fn anti(a: &qcliff::cells::LinearOperator, b: &qcliff::cells::LinearOperator) -> qcliff::cells::LinearOperator {
    a.anticommutator(b).unwrap()
}

fn assert_op(op: &qcliff::cells::LinearOperator, want_identity: bool, what: &str) {
    let p = op.p();
    for r in 0..=2 * p {
        let m = op.matrix_on(r).unwrap();
        if want_identity {
            assert!(m.is_identity(), "{what} on degree {r}");
        } else {
            assert!(m.is_zero(), "{what} on degree {r}");
        }
    }
}

#[test]
fn graded_grassmann_and_duality_relations() {
    use CellSign::{Minus as M, Plus as P};
    for p in 1..=2 {
        let n = 2 * p;
        for j in 1..=n {
            for k in 1..=n {
                for dag in [false, true] {
                    // Grassmann: shift -2, +2 and mixed parts
                    let mm = anti(&comp(p, j, dag, M), &comp(p, k, dag, M));
                    let pp = anti(&comp(p, j, dag, P), &comp(p, k, dag, P));
                    let mixed = comp(p, j, dag, M)
                        .then_after(&comp(p, k, dag, P))
                        .unwrap()
                        .plus(&comp(p, j, dag, P).then_after(&comp(p, k, dag, M)).unwrap())
                        .unwrap()
                        .plus(&comp(p, k, dag, M).then_after(&comp(p, j, dag, P)).unwrap())
                        .unwrap()
                        .plus(&comp(p, k, dag, P).then_after(&comp(p, j, dag, M)).unwrap())
                        .unwrap();
                    assert_op(&mm, false, "f-f- anticommutator");
                    assert_op(&pp, false, "f+f+ anticommutator");
                    assert_op(&mixed, false, "mixed Grassmann part");
                }
                // duality
                let mm = anti(&comp(p, j, false, M), &comp(p, k, true, M));
                let pp = anti(&comp(p, j, false, P), &comp(p, k, true, P));
                let mixed = comp(p, j, false, P)
                    .then_after(&comp(p, k, true, M))
                    .unwrap()
                    .plus(&comp(p, j, false, M).then_after(&comp(p, k, true, P)).unwrap())
                    .unwrap()
                    .plus(&comp(p, k, true, P).then_after(&comp(p, j, false, M)).unwrap())
                    .unwrap()
                    .plus(&comp(p, k, true, M).then_after(&comp(p, j, false, P)).unwrap())
                    .unwrap();
                assert_op(&mm, false, "f-f†- anticommutator");
                assert_op(&pp, false, "f+f†+ anticommutator");
                assert_op(&mixed, j == k, "mixed duality part");
            }
        }
    }
}

#[test]
fn witt_relations_spot_checks() {
    use CellSign::{Minus as M, Plus as P};
    let p = 2;
    for j in 1..=2 * p {
        let sq = comp(p, j, false, M).then_after(&comp(p, j, false, M)).unwrap();
        assert_op(&sq, false, "f- squared");
        let sq = comp(p, j, true, P).then_after(&comp(p, j, true, P)).unwrap();
        assert_op(&sq, false, "f†+ squared");
        let mix = anti(&comp(p, j, true, P), &comp(p, j, true, M));
        assert_op(&mix, false, "f†+ f†- anticommutator");
    }
}

#[test]
fn invalid_labels_rejected() {
    assert!(projector(2, 2, 1).is_err());
    assert!(witt_component(2, WittIndex::fd(1), CellLabel::new(5, 1), CellSign::Minus).is_err());
    assert!(pq_scalar_check(1, CellLabel::new(2, 2)).is_err());
}

#[test]
fn witt_vectors_against_p_and_q() {
    use qcliff::cells::LinearOperator as Op;
    for p in 1..=3 {
        let (pp, q) = (op_p(p).unwrap(), op_q(p).unwrap());
        for j in 1..=2 * p {
            let f = Op::witt(p, WittIndex::f(j)).unwrap();
            let fd = Op::witt(p, WittIndex::fd(j)).unwrap();
            assert!(pp.commutator(&f).unwrap().is_zero().unwrap());
            assert!(q.commutator(&fd).unwrap().is_zero().unwrap());
            // [Q, f_j] is the partner creation operator, up to sign
            let (partner, sign) = if j % 2 == 1 { (j + 1, -1) } else { (j - 1, 1) };
            let fd_partner = Op::witt(p, WittIndex::fd(partner)).unwrap().scaled(fe(sign));
            assert!(q.commutator(&f).unwrap().equals(&fd_partner).unwrap());
            let f_partner = Op::witt(p, WittIndex::f(partner)).unwrap().scaled(fe(-sign));
            assert!(pp.commutator(&fd).unwrap().equals(&f_partner).unwrap());
            // hence [Q^2, f_j] = 2 Q [Q, f_j], which is nonzero once p >= 2
            let q2 = q.pow(2).commutator(&f).unwrap();
            assert!(q2.equals(&q.then_after(&fd_partner).unwrap().scaled(fe(2))).unwrap());
            assert_eq!(q2.is_zero().unwrap(), p == 1);
        }
    }
}

fn spinor_strategy() -> impl Strategy<Value = (u64, usize)> {
    (any::<u64>(), 2usize..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn p_and_q_are_adjoint((seed, r) in spinor_strategy()) {
        let p = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambda = witt::random_spinor(p, r, &mut rng).unwrap();
        let mu = witt::random_spinor(p, r - 2, &mut rng).unwrap();
        let lhs = op_p(p).unwrap().apply(&lambda).unwrap().inner(&mu).unwrap();
        let rhs = lambda.inner(&op_q(p).unwrap().apply(&mu).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn operators_are_linear((seed, r) in spinor_strategy()) {
        let p = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = witt::random_spinor(p, r, &mut rng).unwrap();
        let y = witt::random_spinor(p, r, &mut rng).unwrap();
        let a = witt::random_small(&mut rng);
        let b = witt::random_small(&mut rng);
        for op in [casimir(p).unwrap(), projector(p, r, r.min(2 * p - r)).unwrap(), op_q(p).unwrap()] {
            let lhs = op.apply(&(&x.scale(&a) + &y.scale(&b))).unwrap();
            let rhs = &op.apply(&x).unwrap().scale(&a) + &op.apply(&y).unwrap().scale(&b);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn projectors_reconstruct((seed, r) in spinor_strategy()) {
        let p = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = witt::random_spinor(p, r, &mut rng).unwrap();
        let mut sum = Multivector::zero(witt::algebra_dim(p));
        for s in cells_in_degree(p, r) {
            let y = projector(p, r, s).unwrap().apply(&x).unwrap();
            prop_assert!(cell_basis(p, CellLabel::new(r, s)).unwrap().contains(&y).unwrap());
            sum = &sum + &y;
        }
        prop_assert_eq!(sum, x);
    }
}

#[test]
fn operator_apply_matches_left_multiplication() {
    let p = 2;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x = witt::random_spinor(p, 2, &mut rng).unwrap();
    let q = op_q(p).unwrap();
    let via_matrix = q.then_after(&qcliff::cells::LinearOperator::identity(p)).unwrap().apply(&x).unwrap();
    assert_eq!(via_matrix, q.apply(&x).unwrap());
}
