use proptest::prelude::*;
use qcliff::clifford::Multivector;
use qcliff::dirac::*;
use qcliff::groups::*;
use qcliff::witt::{binomial, f, fd, primitive_idempotent, spinor_monomial};
use qcliff::FieldElement;

fn fe(n: i64) -> FieldElement {
    FieldElement::from_int(n)
}

fn ivac(p: usize) -> Multivector {
    primitive_idempotent(p).unwrap()
}

fn spinor_poly(scalar: CliffordPolynomial, value: Multivector) -> CliffordPolynomial {
    scalar.right_mul(&value).unwrap()
}

#[test]
fn dirac_of_clifford_variable() {
    for p in 1..=3 {
        let x = CliffordPolynomial::clifford_variable(p).unwrap();
        let got = apply_dirac(DiracKind::D, &x).unwrap();
        // Σ_α e_α e_α, each square -1
        let want = CliffordPolynomial::constant(p, Multivector::one(4 * p).scale(&fe(-(4 * p as i64)))).unwrap();
        assert_eq!(got, want);
    }
}

#[test]
fn minus_dirac_squared_on_x1_squared() {
    let p = 1;
    let f = CliffordPolynomial::term(p, Monomial::from_exps([(1, 2)]), Multivector::one(4)).unwrap();
    let d2 = apply_dirac(DiracKind::D, &apply_dirac(DiracKind::D, &f).unwrap()).unwrap();
    let want = CliffordPolynomial::constant(p, Multivector::one(4).scale(&fe(2))).unwrap();
    assert_eq!(d2.scale(&fe(-1)), want);
    assert_eq!(f.laplacian().unwrap(), want);
}

#[test]
fn identity_suite_holds() {
    for p in 1..=2 {
        for check in operator_identity_suite(p, 3).unwrap() {
            assert!(check.ok(), "p={p}: {}", check.name);
        }
    }
}

#[test]
fn twisted_symbols_by_hand_p1() {
    // I[D] = -∂_{y1} e1 + ∂_{x1} e2 - ∂_{y2} e3 + ∂_{x2} e4
    let di = dirac_operator(1, DiracKind::DI).unwrap();
    let e = |a| Multivector::basis_vector(4, a).unwrap();
    assert_eq!(di.symbol(), &[e(2), -&e(1), e(4), -&e(3)]);
    // J[e1] = e3, J[e2] = -e4, J[e3] = -e1, J[e4] = e2
    let dj = dirac_operator(1, DiracKind::DJ).unwrap();
    assert_eq!(dj.symbol(), &[e(3), -&e(4), -&e(1), e(2)]);
}

#[test]
fn twist_of_clifford_variable() {
    let x = CliffordPolynomial::clifford_variable(1).unwrap();
    let ix = twist_vector(Structure::I, &x).unwrap();
    let e = |a| Multivector::basis_vector(4, a).unwrap();
    let want = CliffordPolynomial::from_terms(
        1,
        [
            (Monomial::var(2), -&e(1)),
            (Monomial::var(1), e(2)),
            (Monomial::var(4), -&e(3)),
            (Monomial::var(3), e(4)),
        ],
    )
    .unwrap();
    assert_eq!(ix, want);
    let kx = twist_vector(Structure::K, &x).unwrap();
    assert_eq!(kx, twist_vector(Structure::J, &ix).unwrap());
    assert!(twist_vector(Structure::I, &CliffordPolynomial::constant(1, Multivector::one(4)).unwrap()).is_err());
}

#[test]
fn zbar_one_is_hermitian_not_quaternionic() {
    let p = 1;
    let f = spinor_poly(CliffordPolynomial::zbar(p, 1).unwrap(), ivac(p));
    assert!(apply_dirac(DiracKind::DzDag, &f).unwrap().is_zero());
    assert!(is_monogenic(&f, MonogenicSystem::Euclidean).unwrap().monogenic);
    assert!(is_monogenic(&f, MonogenicSystem::Hermitian).unwrap().monogenic);
    assert!(check_operators(MonogenicSystem::Hermitian.hermitian_operators(), &f).unwrap().monogenic);
    let q = is_monogenic(&f, MonogenicSystem::Quaternionic).unwrap();
    assert!(!q.monogenic);
    let v = check_operators(MonogenicSystem::Quaternionic.hermitian_operators(), &f).unwrap();
    let (kind, image) = v.witness.unwrap();
    assert_eq!(kind, DiracKind::DzJDag);
    let want = CliffordPolynomial::constant(p, -&fd(p, 2).product(&ivac(p)).unwrap()).unwrap();
    assert_eq!(image, want);
}

#[test]
fn x1_vacuum_is_not_monogenic() {
    let p = 1;
    let f = spinor_poly(CliffordPolynomial::var(p, 1).unwrap(), ivac(p));
    let v = is_monogenic(&f, MonogenicSystem::Euclidean).unwrap();
    assert!(!v.monogenic);
    let (kind, image) = v.witness.unwrap();
    assert_eq!(kind, DiracKind::D);
    let e1i = Multivector::basis_vector(4, 1).unwrap().product(&ivac(p)).unwrap();
    assert_eq!(image, CliffordPolynomial::constant(p, e1i).unwrap());
}

#[test]
fn dz_of_z1_vacuum() {
    let p = 1;
    let f = spinor_poly(CliffordPolynomial::z(p, 1).unwrap(), ivac(p));
    let got = apply_dirac(DiracKind::Dz, &f).unwrap();
    assert_eq!(got, CliffordPolynomial::constant(p, fd(p, 1).product(&ivac(p)).unwrap()).unwrap());
    assert!(apply_dirac(DiracKind::DzDag, &f).unwrap().is_zero());
}

#[test]
fn witt_twist_table() {
    let t = structure_triple(2).unwrap();
    assert_eq!(qcliff::dirac::twist_vector_value(&t.j, &f(2, 3)).unwrap(), -&fd(2, 4));
    assert!(qcliff::dirac::witt_twist_table(3).unwrap().ok());
}

#[test]
fn hermitian_operators_square_to_zero() {
    for p in 1..=2 {
        let dz = dirac_operator(p, DiracKind::Dz).unwrap();
        let dzd = dirac_operator(p, DiracKind::DzDag).unwrap();
        let d = dirac_operator(p, DiracKind::D).unwrap();
        for f in spanning_set(p, 3).unwrap() {
            assert!(dz.apply(&dz.apply(&f).unwrap()).unwrap().is_zero());
            assert!(dzd.apply(&dzd.apply(&f).unwrap()).unwrap().is_zero());
            let d2 = d.apply(&d.apply(&f).unwrap()).unwrap().scale(&fe(-1));
            assert_eq!(d2, f.laplacian().unwrap());
        }
    }
}

#[test]
fn componentwise_positive_example() {
    let p = 1;
    let a = spinor_poly(CliffordPolynomial::zbar(p, 1).unwrap(), ivac(p));
    let b = spinor_poly(CliffordPolynomial::z(p, 1).unwrap(), spinor_monomial(p, 0b11).unwrap());
    let f = a.add(&b).unwrap();
    let rep = hermitian_componentwise_check(&f).unwrap();
    assert!(rep.consistent());
    assert!(rep.hermitian);
    assert_eq!(rep.components.iter().map(|c| c.0).collect::<Vec<_>>(), vec![0, 2]);
    assert!(rep.component_monogenic.iter().all(|c| c.1));
}

#[test]
fn componentwise_negative_example() {
    // z̄_1 I + z̄_2 f†_1 f†_2 I: the second summand fails ∂_z†
    let p = 1;
    let a = spinor_poly(CliffordPolynomial::zbar(p, 1).unwrap(), ivac(p));
    let b = spinor_poly(CliffordPolynomial::zbar(p, 2).unwrap(), spinor_monomial(p, 0b11).unwrap());
    let f = a.add(&b).unwrap();
    let rep = hermitian_componentwise_check(&f).unwrap();
    assert!(rep.consistent());
    assert!(!rep.hermitian);
    assert_eq!(rep.failing_component, Some(2));
    assert!(!is_monogenic(&f, MonogenicSystem::Hermitian).unwrap().monogenic);
}

#[test]
fn componentwise_rejects_non_spinors() {
    let f = CliffordPolynomial::constant(1, Multivector::one(4)).unwrap();
    assert!(hermitian_componentwise_check(&f).is_err());
}

#[test]
fn euclidean_kernel_matches_fischer_count() {
    // spinor-valued monogenic k-homogeneous polynomials in m variables: 2^{2p} C(m+k-2, k)
    let p = 1;
    for k in 0..=2u32 {
        let ker = monogenic_kernel(p, MonogenicSystem::Euclidean, k).unwrap();
        assert_eq!(ker.len(), 4 * binomial(4 + k as usize - 2, k as usize), "k={k}");
        for g in &ker {
            assert!(is_monogenic(g, MonogenicSystem::Euclidean).unwrap().monogenic);
        }
    }
}

#[test]
fn kernels_are_nested() {
    let p = 1;
    for k in 1..=2u32 {
        let e = monogenic_kernel(p, MonogenicSystem::Euclidean, k).unwrap().len();
        let h = monogenic_kernel(p, MonogenicSystem::Hermitian, k).unwrap();
        let q = monogenic_kernel(p, MonogenicSystem::Quaternionic, k).unwrap();
        assert!(q.len() <= h.len() && h.len() < e);
        for g in &q {
            assert!(check_operators(MonogenicSystem::Quaternionic.hermitian_operators(), g).unwrap().monogenic);
        }
        for g in &h {
            assert!(hermitian_componentwise_check(g).unwrap().consistent());
        }
    }
}

fn spin_q_generators() -> Vec<SpinElement> {
    [vec![(1, 1, 2), (-1, 3, 4)], vec![(1, 1, 3), (1, 2, 4)], vec![(1, 1, 4), (-1, 2, 3)]]
        .into_iter()
        .map(|t| exp_pi4_bivector(4, &Pi4Bivector::new(t)).unwrap())
        .collect()
}

#[test]
fn l_action_preserves_quaternionic_kernel() {
    let p = 1;
    let gens = spin_q_generators();
    for s in &gens {
        assert!(subgroup_membership(GroupElement::Spin(s), Subgroup::SpinQ).unwrap());
    }
    for k in 1..=2u32 {
        for g in monogenic_kernel(p, MonogenicSystem::Quaternionic, k).unwrap() {
            for s in &gens {
                let moved = l_action(s, &g).unwrap();
                assert!(is_monogenic(&moved, MonogenicSystem::Quaternionic).unwrap().monogenic);
            }
        }
    }
}

#[test]
fn l_action_preserves_hermitian_kernel_under_spin_i() {
    let p = 1;
    let s = exp_pi4_bivector(4, &Pi4Bivector::new(vec![(1, 1, 3), (1, 2, 4)])).unwrap();
    assert!(subgroup_membership(GroupElement::Spin(&s), Subgroup::SpinI).unwrap());
    let outside = exp_pi4_bivector(4, &Pi4Bivector::new(vec![(1, 1, 3)])).unwrap();
    assert!(!subgroup_membership(GroupElement::Spin(&outside), Subgroup::SpinI).unwrap());
    let mut some_leaves = false;
    for g in monogenic_kernel(p, MonogenicSystem::Hermitian, 1).unwrap() {
        assert!(is_monogenic(&l_action(&s, &g).unwrap(), MonogenicSystem::Hermitian).unwrap().monogenic);
        some_leaves |= !is_monogenic(&l_action(&outside, &g).unwrap(), MonogenicSystem::Hermitian).unwrap().monogenic;
    }
    assert!(some_leaves);
}

#[test]
fn json_roundtrip_and_format() {
    let f = CliffordPolynomial::term(1, Monomial::from_exps([(1, 2)]), Multivector::basis_vector(4, 3).unwrap()).unwrap();
    let s = serde_json::to_string(&f).unwrap();
    assert!(s.contains("\"exps\":{\"1\":2}"), "{s}");
    let back: CliffordPolynomial = serde_json::from_str(&s).unwrap();
    assert_eq!(back, f);
    assert!(serde_json::from_str::<CliffordPolynomial>(r#"{"p":1,"terms":[{"exps":{"9":1},"mv":{"dim":4,"terms":[]}}]}"#).is_err());
}

#[test]
fn kind_tags_roundtrip() {
    for k in DiracKind::ALL {
        assert_eq!(k.to_string().parse::<DiracKind>().unwrap(), k);
    }
    assert!("dz_bar".parse::<DiracKind>().is_err());
}

fn poly_strategy() -> impl Strategy<Value = Vec<([u32; 4], u32, i64)>> {
    prop::collection::vec((prop::array::uniform4(0u32..=2), 0u32..16, -3i64..=3), 1..6)
}

fn poly_from(raw: &[([u32; 4], u32, i64)]) -> CliffordPolynomial {
    let terms = raw.iter().map(|(e, mask, c)| {
        let m = Monomial::from_exps(e.iter().enumerate().map(|(i, &k)| (i + 1, k)));
        (m, Multivector::from_terms(4, vec![(*mask, fe(*c))]).unwrap())
    });
    CliffordPolynomial::from_terms(1, terms).unwrap()
}

fn spin_from(planes: &[(i64, usize, usize)]) -> SpinElement {
    let mut s = SpinElement::new(Multivector::one(4)).unwrap();
    for &(c, i, j) in planes {
        if i != j {
            s = s.mul(&exp_pi4_bivector(4, &Pi4Bivector::new(vec![(c, i, j)])).unwrap()).unwrap();
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn minus_dirac_squared_is_laplacian(raw in poly_strategy()) {
        let f = poly_from(&raw);
        let d2 = apply_dirac(DiracKind::D, &apply_dirac(DiracKind::D, &f).unwrap()).unwrap();
        prop_assert_eq!(d2.scale(&fe(-1)), f.laplacian().unwrap());
    }

    #[test]
    fn l_action_commutes_with_dirac(raw in poly_strategy(), planes in prop::collection::vec((-3i64..=4, 1usize..=4, 1usize..=4), 1..4)) {
        let f = poly_from(&raw);
        let s = spin_from(&planes);
        let lhs = apply_dirac(DiracKind::D, &l_action(&s, &f).unwrap()).unwrap();
        let rhs = l_action(&s, &apply_dirac(DiracKind::D, &f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn l_action_is_a_representation(raw in poly_strategy(), a in prop::collection::vec((-3i64..=4, 1usize..=4, 1usize..=4), 1..3), b in prop::collection::vec((-3i64..=4, 1usize..=4, 1usize..=4), 1..3)) {
        let f = poly_from(&raw);
        let (s, t) = (spin_from(&a), spin_from(&b));
        let lhs = l_action(&s.mul(&t).unwrap(), &f).unwrap();
        let rhs = l_action(&s, &l_action(&t, &f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn random_quaternionic_combinations_pass_every_checker(coeffs in prop::collection::vec(-3i64..=3, 64)) {
        let ker = monogenic_kernel(1, MonogenicSystem::Quaternionic, 2).unwrap();
        let mut g = CliffordPolynomial::zero(1);
        for (b, c) in ker.iter().zip(&coeffs) {
            g = g.add(&b.scale(&fe(*c))).unwrap();
        }
        prop_assert!(is_monogenic(&g, MonogenicSystem::Quaternionic).unwrap().monogenic);
        prop_assert!(is_monogenic(&g, MonogenicSystem::Hermitian).unwrap().monogenic);
        prop_assert!(is_monogenic(&g, MonogenicSystem::Euclidean).unwrap().monogenic);
        prop_assert!(hermitian_componentwise_check(&g).unwrap().consistent());
    }
}
