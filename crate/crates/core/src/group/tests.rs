use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::env::f_factor;
use crate::env::Enveloping;
use crate::liesuper::tests::osp12;

const Q: Field = Field::Rationals;

fn q(n: i64) -> Scalar {
    Q.from_i64(n)
}

fn mat(rows: &[&[i64]]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

fn var(m: usize, k: usize) -> Polynomial {
    Polynomial::var(Q, m * m + 1, k)
}

fn one(m: usize) -> Polynomial {
    Polynomial::one(Q, m * m + 1)
}

pub(crate) fn sl2_group() -> MatrixGroup {
    let det = var(2, 0).mul(&var(2, 3)).sub(&var(2, 1).mul(&var(2, 2)));
    let eqs = vec![det.sub(&one(2)), var(2, 4).sub(&one(2))];
    let basis = vec![mat(&[&[1, 0], &[0, -1]]), mat(&[&[0, 1], &[0, 0]]), mat(&[&[0, 0], &[1, 0]])];
    MatrixGroup::new(Q, 2, eqs, Some(basis)).unwrap()
}

/// `SL_2` acting on osp(1|2): conjugation on the even part and `d·[[g22, g21], [g12, g11]]`
/// on the odd span of `x, y`.
pub(crate) fn osp_action() -> GroupAction {
    let g = sl2_group();
    let d = var(2, 4);
    let odd = vec![vec![d.mul(&var(2, 3)), d.mul(&var(2, 2))], vec![d.mul(&var(2, 1)), d.mul(&var(2, 0))]];
    GroupAction::from_odd_block(g, osp12(Q), odd).unwrap()
}

fn grass(n: u32) -> GrassmannAlgebra {
    GrassmannAlgebra::new(n, Q).unwrap()
}

fn tt(alg: GrassmannAlgebra, i: u32, j: u32) -> GrassmannElement {
    alg.generator(i).mul(&alg.generator(j))
}

fn infinitesimal(g: &MatrixGroup, eps: &GrassmannElement, x: &Matrix) -> GroupPoint {
    g.infinitesimal_point(eps, x).unwrap()
}

fn samples(g: &MatrixGroup, alg: GrassmannAlgebra) -> Vec<GroupPoint> {
    let torus = g.point_from_scalars(alg, &vec![vec![q(2), q(0)], vec![q(0), Q.from_ratio(1, 2).unwrap()]]).unwrap();
    let up = infinitesimal(g, &tt(alg, 0, 1), &g.lie_basis()[1]);
    let down = infinitesimal(g, &tt(alg, 2, 3), &g.lie_basis()[2]);
    let swap = g.point_from_scalars(alg, &mat(&[&[0, 1], &[-1, 0]])).unwrap();
    let mixed = torus.mul_unchecked(&up).mul_unchecked(&down);
    vec![torus, up, down, swap, mixed]
}

fn test_functions(m: usize) -> Vec<Polynomial> {
    let mut fs: Vec<Polynomial> = (0..m * m + 1).map(|k| var(m, k)).collect();
    fs.push(var(m, 0).mul(&var(m, m * m - 1)));
    fs.push(var(m, 1).pow(2).add(&one(m)));
    fs
}

#[test]
fn diagonal_points_multiply_to_identity() {
    let alg = grass(2);
    let gl2 = MatrixGroup::new(Q, 2, vec![], None).unwrap();
    let t = tt(alg, 0, 1);
    let p = gl2.point(alg, vec![vec![alg.one().add(&t), alg.zero()], vec![alg.zero(), alg.one()]]).unwrap();
    let r = gl2.point(alg, vec![vec![alg.one().sub(&t), alg.zero()], vec![alg.zero(), alg.one()]]).unwrap();
    assert!(gl2.mul(&p, &r).unwrap().is_identity());
    assert_eq!(gl2.inv(&p).unwrap(), r);
}

#[test]
fn unipotent_inverse() {
    let g = sl2_group();
    let alg = grass(2);
    let t = tt(alg, 0, 1);
    let p = infinitesimal(&g, &t, &g.lie_basis()[1]);
    let expected = infinitesimal(&g, &t.neg(), &g.lie_basis()[1]);
    assert_eq!(g.inv(&p).unwrap(), expected);
}

#[test]
fn non_members_are_rejected() {
    let g = sl2_group();
    let alg = grass(2);
    assert!(g.point_from_scalars(alg, &mat(&[&[2, 0], &[0, 1]])).is_err());
    let odd = vec![vec![alg.one(), alg.generator(0)], vec![alg.zero(), alg.one()]];
    assert!(matches!(g.point(alg, odd), Err(Error::Parity(_))));
    let singular = GroupPoint::from_matrix_unchecked(alg, amat_from_scalars(alg, &mat(&[&[1, 1], &[1, 1]])));
    assert!(singular.is_err());
}

#[test]
fn lie_algebra_dimensions() {
    assert_eq!(sl2_group().lie_dim(), 3);
    let v = |k| var(2, k);
    let torus = MatrixGroup::new(Q, 2, vec![v(1), v(2)], None).unwrap();
    assert_eq!(torus.lie_dim(), 2);
    let trivial = MatrixGroup::new(Q, 2, vec![v(0).sub(&one(2)), v(1), v(2), v(3).sub(&one(2))], None).unwrap();
    assert_eq!(trivial.lie_dim(), 0);
    assert_eq!(MatrixGroup::new(Q, 3, vec![], None).unwrap().lie_dim(), 9);
    // det = 1 written through d only
    let via_d = MatrixGroup::new(Q, 2, vec![var(2, 4).sub(&one(2))], None).unwrap();
    assert_eq!(via_d.lie_dim(), 3);
}

#[test]
fn wrong_lie_basis_is_rejected() {
    let det = var(2, 0).mul(&var(2, 3)).sub(&var(2, 1).mul(&var(2, 2)));
    let bad = vec![mat(&[&[1, 0], &[0, 0]]), mat(&[&[0, 1], &[0, 0]]), mat(&[&[0, 0], &[1, 0]])];
    assert!(MatrixGroup::new(Q, 2, vec![det.sub(&one(2))], Some(bad)).is_err());
}

#[test]
fn tangent_pairings_in_gl1() {
    let g = MatrixGroup::new(Q, 1, vec![], None).unwrap();
    let x = mat(&[&[1]]);
    assert_eq!(g.tangent_pairing(&x, &var(1, 0)).unwrap(), q(1));
    assert_eq!(g.tangent_pairing(&x, &var(1, 0).pow(2)).unwrap(), q(2));
    assert_eq!(g.tangent_pairing(&x, &Polynomial::constant(Q, 2, q(5))).unwrap(), q(0));
    assert_eq!(g.tangent_pairing(&x, &var(1, 1)).unwrap(), q(-1));
}

fn power(k: i64, n: usize) -> Scalar {
    (0..n).fold(q(1), |acc, _| &acc * &q(k))
}

fn gl1_power(env: &Arc<Enveloping>, n: usize) -> UEnvElement {
    let x = UEnvElement::from_lie(env, &LieSuperElementA::from_vector(grass(0), &[q(1)]));
    (0..n).fold(UEnvElement::one(env, grass(0)), |acc, _| acc.mul(&x))
}

#[test]
fn second_order_pairing_in_gl1() {
    let g = MatrixGroup::new(Q, 1, vec![], None).unwrap();
    let env = Enveloping::new(g.even_lie_algebra(vec!["x".into()]).unwrap());
    let x2 = gl1_power(&env, 2);
    assert_eq!(g.distribution_pairing(&x2, &var(1, 0)).unwrap(), q(1));
    assert_eq!(g.distribution_pairing(&x2, &var(1, 0).pow(2)).unwrap(), q(4));
    assert_eq!(g.distribution_pairing(&x2, &var(1, 1)).unwrap(), q(1));
}

proptest! {
    // x acts as the invariant field g d/dg, so ⟨x^n, g^k⟩ = k^n.
    #[test]
    fn gl1_pairing_matches_derivatives(n in 0usize..5, k in -3i32..6) {
        let g = MatrixGroup::new(Q, 1, vec![], None).unwrap();
        let env = Enveloping::new(g.even_lie_algebra(vec!["x".into()]).unwrap());
        let c = Polynomial::monomial(Q, 2, 0, k);
        prop_assert_eq!(g.distribution_pairing(&gl1_power(&env, n), &c).unwrap(), power(k as i64, n));
    }

    #[test]
    fn tangent_vectors_obey_leibniz(a in prop::collection::vec(-3i64..4, 5), b in prop::collection::vec(-3i64..4, 5), xi in 0usize..3) {
        let g = sl2_group();
        let lin = |c: &[i64]| (0..5).fold(one(2).scale(&q(c[4])), |acc, k| if k < 4 { acc.add(&var(2, k).scale(&q(c[k]))) } else { acc });
        let c1 = lin(&a).mul(&var(2, 0));
        let c2 = lin(&b).add(&var(2, 4).pow(2));
        let ids = [q(1), q(0), q(0), q(1), q(1)];
        let x = &g.lie_basis()[xi];
        let lhs = g.tangent_pairing(x, &c1.mul(&c2)).unwrap();
        let rhs = &(&g.tangent_pairing(x, &c1).unwrap() * &c2.eval_scalars(&ids).unwrap())
            + &(&c1.eval_scalars(&ids).unwrap() * &g.tangent_pairing(x, &c2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn action_is_multiplicative_on_random_words(word in prop::collection::vec((0usize..3, -2i64..3), 1..5)) {
        let a = osp_action();
        let g = a.group();
        let alg = grass(2);
        let t = tt(alg, 0, 1);
        let mut p = g.identity(alg);
        let mut expected = amat_identity(alg, 5);
        for (k, c) in word {
            let step = if k == 2 {
                let s = if c == 0 { 3 } else { c };
                let m = vec![vec![q(s), q(0)], vec![q(0), Q.from_ratio(1, s).unwrap()]];
                g.point_from_scalars(alg, &m).unwrap()
            } else {
                infinitesimal(g, &t.scale(&q(c)), &g.lie_basis()[k + 1])
            };
            expected = amat_mul(&expected, &a.action_matrix(&step).unwrap());
            p = g.mul(&p, &step).unwrap();
        }
        prop_assert_eq!(a.action_matrix(&p).unwrap(), expected);
    }
}

#[test]
fn grouplike_factor_maps_to_infinitesimal_point() {
    let g = sl2_group();
    let env = Enveloping::new(g.even_lie_algebra(vec!["h".into(), "e".into(), "f".into()]).unwrap());
    let alg = grass(4);
    let t = tt(alg, 0, 1);
    let s = tt(alg, 2, 3);
    for k in 0..3 {
        let f = f_factor(&env, &t, &linalg::unit_vector(Q, 3, k)).unwrap();
        assert_eq!(g.grouplike_to_point(&f).unwrap(), infinitesimal(&g, &t, &g.lie_basis()[k]));
    }
    // products of factors map to products of points, including second-order terms
    for (i, j) in [(0, 0), (0, 1), (1, 2), (2, 1), (1, 1)] {
        let fi = f_factor(&env, &t, &linalg::unit_vector(Q, 3, i)).unwrap();
        let fj = f_factor(&env, &s, &linalg::unit_vector(Q, 3, j)).unwrap();
        let prod = fi.mul(&fj);
        let expected = infinitesimal(&g, &t, &g.lie_basis()[i]).mul_unchecked(&infinitesimal(&g, &s, &g.lie_basis()[j]));
        let got = g.grouplike_to_point(&prod).unwrap();
        assert_eq!(got, expected, "factors {i}, {j}");
        assert!(g.contains(&got).unwrap());
    }
}

#[test]
fn non_grouplike_is_rejected() {
    let g = sl2_group();
    let env = Enveloping::new(g.even_lie_algebra(vec!["h".into(), "e".into(), "f".into()]).unwrap());
    let alg = grass(2);
    let h = UEnvElement::from_lie(&env, &LieSuperElementA::from_vector(alg, &linalg::unit_vector(Q, 3, 0)));
    let u = UEnvElement::one(&env, alg).add(&h);
    assert!(g.grouplike_to_point(&u).is_err());
}

#[test]
fn conjugation_by_torus_scales_root_vectors() {
    let a = osp_action();
    let g = a.group();
    let alg = grass(0);
    let half = Q.from_ratio(1, 2).unwrap();
    let p = g.point_from_scalars(alg, &vec![vec![q(2), q(0)], vec![q(0), half.clone()]]).unwrap();
    let pm = a.action_matrix(&p).unwrap();
    let c = |x: &Scalar| alg.constant(x.clone());
    assert_eq!(pm[0][0], alg.one());
    assert_eq!(pm[1][1], c(&Q.from_ratio(1, 4).unwrap()));
    assert_eq!(pm[2][2], c(&q(4)));
    assert_eq!(pm[3][3], c(&half));
    assert_eq!(pm[4][4], c(&q(2)));
    let z = LieSuperElementA::basis(alg, 5, 1, alg.one());
    let zg = a.adjoint_apply(&p, &z).unwrap();
    assert_eq!(zg, LieSuperElementA::basis(alg, 5, 1, c(&Q.from_ratio(1, 4).unwrap())));
}

#[test]
fn osp_action_satisfies_conditions() {
    let a = osp_action();
    assert!(a.first_order_matches_bracket().unwrap());
    let alg = grass(4);
    let r = a.check_conditions(&samples(a.group(), alg), &test_functions(2));
    assert!(r.is_ok(), "{r}");
    for c in ["bracket-derivative", "leibniz", "adjoint-compatibility", "action-composition", "closure", "inverse"] {
        assert!(r.condition(SUITE, c).is_some(), "{c} not checked");
    }
}

#[test]
fn sign_flip_breaks_bracket_derivative() {
    let a = osp_action();
    let flipped = a.with_entry(3, 3, a.rows()[3][3].neg());
    let r = flipped.check_conditions(&samples(a.group(), grass(4)), &test_functions(2));
    assert!(r.failed(SUITE, "bracket-derivative"));
    assert!(!flipped.first_order_matches_bracket().unwrap());
}

#[test]
fn odd_block_mixing_parities_is_rejected() {
    let a = osp_action();
    let mut rows = a.rows().to_vec();
    rows[0][3] = var(2, 0);
    assert!(matches!(GroupAction::new(a.group().clone(), a.lie().clone(), rows), Err(Error::Parity(_))));
}

#[test]
fn even_lie_algebra_is_sl2() {
    let g = sl2_group();
    let l = g.even_lie_algebra(vec!["h".into(), "e".into(), "f".into()]).unwrap();
    assert_eq!(l.bracket_basis(0, 1), &vec![q(0), q(2), q(0)]);
    assert_eq!(l.bracket_basis(1, 2), &vec![q(1), q(0), q(0)]);
    assert!(l.check_axioms().is_ok());
}
