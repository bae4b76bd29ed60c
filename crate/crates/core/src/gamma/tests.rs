use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::linalg::Matrix;
use crate::hcp::tests::{abelian_pair, borel, osp_pair, torus_pair, torus_sub, unipotent};
use crate::hcp::{centralizer_pair, normalizer_pair, Transform};

const Q: Field = Field::Rationals;

fn q(n: i64) -> Scalar {
    Q.from_i64(n)
}

fn grass(n: u32) -> GrassmannAlgebra {
    GrassmannAlgebra::new(n, Q).unwrap()
}

fn osp() -> Gamma {
    Gamma::new(osp_pair()).unwrap()
}

fn scalar_point(gamma: &Gamma, alg: GrassmannAlgebra, m: &[[i64; 2]; 2]) -> GroupPoint {
    let m: Matrix = m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    gamma.group().point_from_scalars(alg, &m).unwrap()
}

fn expect_point(alg: GrassmannAlgebra, m: [[&str; 2]; 2]) -> GroupPoint {
    let rows = m.iter().map(|r| r.iter().map(|x| alg.parse(x).unwrap()).collect()).collect();
    GroupPoint::from_matrix_unchecked(alg, rows).unwrap()
}

#[test]
fn repeated_odd_letter_produces_the_two_operation() {
    let gamma = osp();
    let alg = grass(2);
    let (t1, t2) = (alg.generator(0), alg.generator(1));
    let p = gamma.from_word(alg, &[Letter::odd_basis(t1.clone(), 2, 0), Letter::odd_basis(t2.clone(), 2, 0)]).unwrap();
    // x<2> = e, so the even part is I - t1 t2 E12
    assert_eq!(p.g, expect_point(alg, [["1", "-t1*t2"], ["0", "1"]]));
    assert_eq!(p.a, vec![t1.add(&t2), alg.zero()]);
}

#[test]
fn out_of_order_odd_letters_produce_the_bracket() {
    let gamma = osp();
    let alg = grass(2);
    let (t1, t2) = (alg.generator(0), alg.generator(1));
    let p = gamma.from_word(alg, &[Letter::odd_basis(t1.clone(), 2, 1), Letter::odd_basis(t2.clone(), 2, 0)]).unwrap();
    // [y, x] = h = diag(1, -1)
    assert_eq!(p.g, expect_point(alg, [["1 - t1*t2", "0"], ["0", "1 + t1*t2"]]));
    assert_eq!(p.a, vec![t2, t1]);
}

#[test]
fn ordered_letters_are_already_normal() {
    let gamma = osp();
    let alg = grass(3);
    let g = scalar_point(&gamma, alg, &[[2, 1], [1, 1]]);
    let word = [Letter::Point(g.clone()), Letter::odd_basis(alg.generator(0), 2, 0), Letter::odd_basis(alg.generator(2), 2, 1)];
    let p = gamma.from_word(alg, &word).unwrap();
    assert_eq!(p.g, g);
    assert_eq!(p.a, vec![alg.generator(0), alg.generator(2)]);
    assert_eq!(gamma.from_word(alg, &gamma.word_of(&p)).unwrap(), p);
}

#[test]
fn points_move_left_through_the_coaction() {
    let gamma = osp();
    let alg = grass(1);
    let half = Q.from_ratio(1, 2).unwrap();
    let h = gamma.group().point(alg, vec![vec![alg.from_i64(2), alg.zero()], vec![alg.zero(), alg.constant(half.clone())]]).unwrap();
    let t = alg.generator(0);
    let p = gamma.from_word(alg, &[Letter::odd_basis(t.clone(), 2, 0), Letter::Point(h.clone())]).unwrap();
    assert_eq!(p.g, h);
    assert_eq!(p.a, vec![t.scale(&half), alg.zero()]);
}

#[test]
fn invalid_letters_are_rejected() {
    let gamma = osp();
    let alg = grass(3);
    let even = alg.generator(0).mul(&alg.generator(1));
    assert!(matches!(gamma.from_word(alg, &[Letter::odd_basis(even, 2, 0)]), Err(Error::Parity(_))));
    assert!(matches!(gamma.from_word(alg, &[Letter::even_basis(alg.generator(0), 3, 0)]), Err(Error::Parity(_))));
    let bad = GroupPoint::from_matrix_unchecked(alg, amat_from_scalars(alg, &vec![vec![q(2), q(0)], vec![q(0), q(1)]])).unwrap();
    assert!(matches!(gamma.from_word(alg, &[Letter::Point(bad)]), Err(Error::Precondition(_))));
    assert!(gamma.element(gamma.group().identity(alg), vec![alg.one(), alg.zero()]).is_err());
    assert!(gamma.element(gamma.group().identity(alg), vec![alg.zero()]).is_err());
}

#[test]
fn generic_odd_vectors_split_into_basis_letters() {
    let gamma = osp();
    let alg = grass(2);
    let t = alg.generator(0);
    let lhs = gamma.from_word(alg, &[Letter::Odd { coeff: t.clone(), vector: vec![q(2), q(-3)] }]).unwrap();
    let rhs = gamma
        .from_word(alg, &[Letter::odd_basis(t.scale(&q(2)), 2, 0), Letter::odd_basis(t.scale(&q(-3)), 2, 1)])
        .unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn group_laws_hold_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for pair in [osp_pair(), torus_pair(), abelian_pair()] {
        let gamma = Gamma::new(pair).unwrap();
        let report = gamma.check_group_law(grass(4), 6, &mut rng);
        assert!(report.is_ok(), "{:?}", report.failing_conditions());
    }
}

#[test]
fn inverse_reverses_the_word() {
    let gamma = osp();
    let alg = grass(4);
    let g = scalar_point(&gamma, alg, &[[1, 1], [0, 1]]);
    let p = gamma.element(g, vec![alg.generator(0), alg.generator(1).add(&alg.generator(2))]).unwrap();
    let pi = gamma.inv(&p).unwrap();
    assert!(gamma.mul(&p, &pi).unwrap().is_identity());
    assert_eq!(gamma.inv(&pi).unwrap(), p);
}

fn random_word(gamma: &Gamma, alg: GrassmannAlgebra, seed: u64, len: usize) -> Vec<Letter> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = gamma.pair().group_samples(alg);
    let n = gamma.odd_dim();
    let r = gamma.even_dim();
    (0..len)
        .map(|_| match rng.gen_range(0..3) {
            0 => Letter::Point(samples[rng.gen_range(0..samples.len())].clone()),
            1 => Letter::odd_basis(random_odd(alg, &mut rng), n, rng.gen_range(0..n)),
            _ => {
                let i = rng.gen_range(0..alg.generators());
                let j = (i + 1 + rng.gen_range(0..alg.generators() - 1)) % alg.generators();
                let eps = alg.generator(i).mul(&alg.generator(j)).scale(&q(rng.gen_range(-2..=2)));
                Letter::even_basis(eps, r, rng.gen_range(0..r))
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rewriting_agrees_with_pair_model(seed in any::<u64>(), len in 1usize..6) {
        let gamma = osp();
        let alg = grass(4);
        let word = random_word(&gamma, alg, seed, len);
        let nf = gamma.from_word(alg, &word).unwrap();
        let pm = gamma.pm_normalize(&gamma.pm_from_word(alg, &word).unwrap()).unwrap();
        prop_assert_eq!(nf, pm);
    }

    #[test]
    fn multiplication_is_associative(seed in any::<u64>()) {
        let gamma = osp();
        let alg = grass(4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = gamma.pair().group_samples(alg);
        let p = gamma.random_element(alg, &samples, &mut rng);
        let r = gamma.random_element(alg, &samples, &mut rng);
        let s = gamma.random_element(alg, &samples, &mut rng);
        let lhs = gamma.mul(&gamma.mul(&p, &r).unwrap(), &s).unwrap();
        let rhs = gamma.mul(&p, &gamma.mul(&r, &s).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn pair_model_rejects_non_grouplikes() {
    let gamma = osp();
    let alg = grass(2);
    let x = UEnvElement::from_lie(gamma.env(), &LieSuperElementA::basis(alg, 5, 3, alg.one()));
    let p = PairModelElement { g: gamma.group().identity(alg), u: x };
    assert!(gamma.pm_normalize(&p).is_err());
}

#[test]
fn push_forward_is_a_homomorphism() {
    let gamma = osp();
    let small = grass(2);
    let big = grass(4);
    let p = gamma.from_word(small, &[Letter::odd_basis(small.generator(0), 2, 1), Letter::odd_basis(small.generator(1), 2, 0)]).unwrap();
    let r = gamma.from_word(small, &[Letter::odd_basis(small.generator(1), 2, 1)]).unwrap();
    let images = [big.generator(3), big.generator(1).add(&big.generator(0).mul(&big.generator(1)).mul(&big.generator(2)))];
    let lhs = gamma.mul(&p, &r).unwrap().push_forward(&images).unwrap();
    let rhs = gamma.mul(&p.push_forward(&images).unwrap(), &r.push_forward(&images).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn points_evaluate_functions() {
    let gamma = osp();
    let alg = grass(3);
    let g = scalar_point(&gamma, alg, &[[3, 1], [2, 1]]);
    let p = gamma.element(g, vec![alg.generator(0), alg.generator(1).add(&alg.generator(2))]).unwrap();
    let g11 = gamma.group().coordinate(0, 0);
    let one = Polynomial::one(Q, 5);
    let val = gamma.point_as_map(&p, &[(g11.clone(), 0), (one, 0b11)]).unwrap();
    let want = alg.from_i64(3).add(&alg.generator(0).mul(&alg.generator(1).add(&alg.generator(2))));
    assert_eq!(val, want);
    assert!(gamma.point_as_map(&p, &[(g11, 0b100)]).is_err());
}

#[test]
fn membership_in_sub_supergroups() {
    let pair = osp_pair();
    let gamma = Gamma::new(pair.clone()).unwrap();
    let alg = grass(2);
    let b = borel(&pair);
    let upper = scalar_point(&gamma, alg, &[[1, 3], [0, 1]]);
    let p = gamma.element(upper.clone(), vec![alg.generator(0), alg.zero()]).unwrap();
    assert!(gamma.membership(&b, &p).unwrap());
    let p = gamma.element(upper, vec![alg.zero(), alg.generator(0)]).unwrap();
    assert!(!gamma.membership(&b, &p).unwrap());
    let lower = scalar_point(&gamma, alg, &[[1, 0], [1, 1]]);
    let p = gamma.element(lower, vec![alg.zero(); 2]).unwrap();
    assert!(!gamma.membership(&b, &p).unwrap());
}

#[test]
fn roundtrip_recovers_the_pair() {
    for pair in [osp_pair(), torus_pair(), abelian_pair()] {
        let gamma = Gamma::new(pair.clone()).unwrap();
        let report = gamma.roundtrip_check(&pair, grass(4));
        assert!(report.is_ok(), "{:?}", report.failing_conditions());
        assert!(report.checked_count() > 0);
    }
}

#[test]
fn roundtrip_needs_four_generators() {
    let pair = osp_pair();
    let report = osp().roundtrip_check(&pair, grass(3));
    assert!(report.failed(ROUNDTRIP_SUITE, "evaluation"));
}

#[test]
fn roundtrip_detects_a_tampered_coaction() {
    let pair = osp_pair();
    let d = Polynomial::var(Q, 5, 4);
    let action = pair.action().with_entry(3, 3, d.mul(&gamma_coordinate(&pair, 0, 0)).scale(&q(2)));
    let gamma = Gamma::with_overrides(pair.clone(), None, Some(action));
    let report = gamma.roundtrip_check(&pair, grass(4));
    assert!(report.failed(ROUNDTRIP_SUITE, "odd-action"));
}

fn gamma_coordinate(pair: &HCPair, i: usize, j: usize) -> Polynomial {
    pair.group().coordinate(i, j)
}

#[test]
fn roundtrip_detects_a_tampered_bracket() {
    let pair = osp_pair();
    let sigma = pair.transform(Transform::Sigma).unwrap();
    let gamma = Gamma::new(sigma).unwrap();
    let report = gamma.roundtrip_check(&pair, grass(4));
    assert!(report.failed(ROUNDTRIP_SUITE, "odd-bracket"));
    assert!(report.failed(ROUNDTRIP_SUITE, "two-operation"));
    assert!(!report.failed(ROUNDTRIP_SUITE, "even-bracket"));
}

#[test]
fn quintuple_conditions_hold() {
    for pair in [osp_pair(), torus_pair()] {
        let report = Gamma::new(pair).unwrap().check_quintuple(grass(4));
        assert!(report.is_ok(), "{:?}", report.failing_conditions());
    }
}

#[test]
fn quintuple_mutations_are_caught() {
    let pair = osp_pair();
    let alg = grass(4);

    let mut lie = pair.lie_unchecked().clone();
    lie.set_bracket(0, 1, vec![q(0), q(3), q(0), q(0), q(0)]);
    let report = Gamma::with_overrides(pair.clone(), Some(lie), None).check_quintuple(alg);
    assert!(report.failed(QUINTUPLE_SUITE, "subgroup"));

    let d = Polynomial::var(Q, 5, 4);
    let odd = pair.action().with_entry(3, 4, d.mul(&pair.group().coordinate(1, 1)).scale(&q(2)));
    let report = Gamma::with_overrides(pair.clone(), None, Some(odd)).check_quintuple(alg);
    assert!(report.failed(QUINTUPLE_SUITE, "inner-compatibility"));

    let even = pair.action().with_entry(1, 1, Polynomial::one(Q, 5));
    let report = Gamma::with_overrides(pair.clone(), None, Some(even)).check_quintuple(alg);
    assert!(report.failed(QUINTUPLE_SUITE, "equivariance"));
}

fn assert_witness(pair: &HCPair, sub: &SubPairData, kind: SubPairKind) {
    let gamma = Gamma::new(pair.clone()).unwrap();
    let alg = grass(4);
    let result = match kind {
        SubPairKind::Normalizer => normalizer_pair(pair, sub).unwrap(),
        SubPairKind::Centralizer => centralizer_pair(pair, sub).unwrap(),
    };
    for z in &result.odd_basis {
        let failures = gamma.witness(sub, kind, z, alg).unwrap();
        assert!(failures.is_empty(), "{kind} of {}: {failures:?}", sub.name());
    }
    for z in linalg::complement_basis(Q, &result.odd_basis, pair.odd_dim()) {
        let failures = gamma.witness(sub, kind, &z, alg).unwrap();
        assert!(!failures.is_empty(), "{kind} of {}: {z:?} should fail", sub.name());
    }
}

#[test]
fn witnesses_confirm_normalizers_and_centralizers() {
    let pair = osp_pair();
    for sub in [borel(&pair), unipotent(&pair), torus_sub(&pair)] {
        assert_witness(&pair, &sub, SubPairKind::Normalizer);
        assert_witness(&pair, &sub, SubPairKind::Centralizer);
    }
}

#[test]
fn random_odd_elements_are_odd() {
    let alg = grass(4);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let a = random_odd(alg, &mut rng);
        assert!(a.is_zero() || a.parity() == Some(Parity::Odd));
    }
}

#[test]
fn json_roundtrip() {
    let gamma = osp();
    let alg = grass(2);
    let p = gamma.from_word(alg, &[Letter::odd_basis(alg.generator(0), 2, 1), Letter::odd_basis(alg.generator(1), 2, 0)]).unwrap();
    assert_eq!(gamma.element_from_json(alg, &p.to_json()).unwrap(), p);
    assert!(gamma.element_from_json(alg, &json!({"g": [["1", "1"], ["0", "2"]]})).is_err());
    assert!(matches!(gamma.element_from_json(alg, &json!({"a": []})), Err(Error::Parse(_))));
}

#[test]
fn grouplike_points_multiply_like_their_factors() {
    let gamma = osp();
    let alg = grass(6);
    let group = gamma.group();
    let eps: Vec<GrassmannElement> = (0..3).map(|k| alg.generator(2 * k).mul(&alg.generator(2 * k + 1))).collect();
    let factors: Vec<UEnvElement> =
        (0..3).map(|k| f_factor(gamma.env(), &eps[k], &gamma.lie().basis_vector(k)).unwrap()).collect();
    for len in 1..=3 {
        let product = factors[..len].iter().skip(1).fold(factors[0].clone(), |acc, f| acc.mul(f));
        let point = group.grouplike_to_point(&product).unwrap();
        let expected = factors[..len]
            .iter()
            .map(|f| group.grouplike_to_point(f).unwrap())
            .reduce(|a, b| a.mul_unchecked(&b))
            .unwrap();
        assert_eq!(point, expected, "product of {len} factors");
    }
}
