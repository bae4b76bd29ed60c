use proptest::prelude::*;

use super::*;
use crate::linalg::identity;

const Q: Field = Field::Rationals;

fn ext(rank: u32) -> GrassmannAlgebra {
    GrassmannAlgebra::new(rank, Q).unwrap()
}

fn basis_wedge(rank: u32, mask: u64) -> ExteriorElement {
    ext(rank).monomial(mask, Q.one())
}

#[test]
fn pairing_examples() {
    use PairingConvention::*;
    for conv in [Deformed, Ordinary] {
        assert!(ext_pairing(&basis_wedge(3, 0), &basis_wedge(3, 0), conv).unwrap().is_one());
        assert!(ext_pairing(&basis_wedge(3, 0b1), &basis_wedge(3, 0b1), conv).unwrap().is_one());
        assert!(ext_pairing(&basis_wedge(3, 0b11), &basis_wedge(3, 0b101), conv).unwrap().is_zero());
    }
    assert_eq!(ext_pairing(&basis_wedge(3, 0b11), &basis_wedge(3, 0b11), Deformed).unwrap(), Q.from_i64(-1));
    assert_eq!(ext_pairing(&basis_wedge(3, 0b11), &basis_wedge(3, 0b11), Ordinary).unwrap(), Q.one());
    assert!(matches!(ext_pairing(&basis_wedge(2, 1), &basis_wedge(3, 1), Deformed), Err(Error::Dimension(_))));
}

#[test]
fn binomial_convention() {
    assert_eq!((binom2(0), binom2(1), binom2(2), binom2(3), binom2(4)), (0, 0, 1, 3, 6));
}

#[test]
fn tensor_pairing_sign() {
    let one = Q.one();
    use Parity::*;
    assert_eq!(tensor_pairing(PairingConvention::Deformed, &one, &one, Odd, Odd), Q.from_i64(-1));
    assert_eq!(tensor_pairing(PairingConvention::Ordinary, &one, &one, Odd, Odd), one);
    for (a, b) in [(Even, Odd), (Odd, Even), (Even, Even)] {
        let v = tensor_pairing(PairingConvention::Deformed, &Q.from_i64(2), &Q.from_i64(3), a, b);
        assert_eq!(v, Q.from_i64(6));
    }
}

#[test]
fn tensor_pairing_is_bilinear() {
    let t = exterior_pairing_table(Q, 2, PairingConvention::Deformed);
    let x = BTreeMap::from([((1usize, 2usize), Q.from_i64(2)), ((3, 0), Q.from_i64(-1)), ((2, 1), Q.one())]);
    let y = BTreeMap::from([((1usize, 2usize), Q.from_i64(5)), ((2, 1), Q.from_i64(7)), ((3, 0), Q.from_i64(3))]);
    let mut termwise = Q.zero();
    for (kx, a) in &x {
        for (ky, b) in &y {
            let single = t.tensor_pair(&t, PairingConvention::Deformed, &BTreeMap::from([(*kx, Q.one())]), &BTreeMap::from([(*ky, Q.one())]));
            termwise += &(&(a * b) * &single);
        }
    }
    assert_eq!(t.tensor_pair(&t, PairingConvention::Deformed, &x, &y), termwise);
    // 2*5*(-1) + 1*7*(-1) + (-1)*3*(-1) with the odd crossing sign on the first two
    assert_eq!(termwise, Q.from_i64(-14));
}

fn small_vec() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-3i64..=3, 3)
}

proptest! {
    #[test]
    fn wedge_pairing_matches_determinant(vs in proptest::collection::vec(small_vec(), 0..=3), ws in proptest::collection::vec(small_vec(), 0..=3)) {
        let to = |v: &Vec<i64>| v.iter().map(|&x| Q.from_i64(x)).collect::<Vector>();
        let vs: Vec<Vector> = vs.iter().map(to).collect();
        let ws: Vec<Vector> = ws.iter().map(to).collect();
        for conv in [PairingConvention::Deformed, PairingConvention::Ordinary] {
            let lhs = ext_pairing(&wedge_of_vectors(ext(3), &vs).unwrap(), &wedge_of_vectors(ext(3), &ws).unwrap(), conv).unwrap();
            prop_assert_eq!(lhs, determinant_pairing(Q, &vs, &ws, conv).unwrap());
        }
    }
}

#[test]
fn exterior_algebras_are_hopf() {
    for rank in 0..=3 {
        let h = HopfData::exterior(Q, rank, "w");
        let r = h.check_axioms();
        assert!(r.is_ok(), "rank {rank}: {r}");
        let r = sigma_deform_hopf(&h).check_axioms();
        assert!(r.is_ok(), "deformed rank {rank}: {r}");
    }
    assert!(HopfData::ground(Q).check_axioms().is_ok());
    assert!(HopfData::group_algebra_z2(Q).check_axioms().is_ok());
}

#[test]
fn axiom_check_catches_a_perturbed_constant() {
    let h = HopfData::exterior(Q, 2, "w");
    let mut product = h.product_table().to_vec();
    product[1][2][3] = Q.from_i64(2);
    let bad = HopfData::new(
        Q,
        h.names().to_vec(),
        h.parities().to_vec(),
        product,
        h.unit().clone(),
        h.coproduct_table().to_vec(),
        h.counit().clone(),
        h.antipode_table().clone(),
    )
    .unwrap();
    assert!(!bad.check_axioms().is_ok());
}

#[test]
fn deformed_exterior_pairing_is_hopf() {
    for rank in 1..=3 {
        let l = HopfData::exterior(Q, rank, "v");
        let h = HopfData::exterior(Q, rank, "w");
        let t = exterior_pairing_table(Q, rank, PairingConvention::Deformed);
        let r = check_hopf_pairing(&l, &h, &t, PairingConvention::Deformed);
        assert!(r.is_ok(), "rank {rank}: {r}");
        let t = exterior_pairing_table(Q, rank, PairingConvention::Ordinary);
        assert!(check_hopf_pairing(&l, &h, &t, PairingConvention::Ordinary).is_ok());
    }
}

#[test]
fn ordinary_values_fail_under_deformed_tensor_rule() {
    let l = HopfData::exterior(Q, 2, "v");
    let h = HopfData::exterior(Q, 2, "w");
    let t = exterior_pairing_table(Q, 2, PairingConvention::Ordinary);
    let r = check_hopf_pairing(&l, &h, &t, PairingConvention::Deformed);
    assert!(r.failed("hopf-pairing", "product-dual-to-coproduct"), "{r}");
}

#[test]
fn trivial_pairing_is_hopf() {
    let l = HopfData::exterior(Q, 2, "v");
    let h = HopfData::exterior(Q, 2, "w");
    let n = l.dim();
    let values = (0..n).map(|i| (0..n).map(|j| &l.counit()[i] * &h.counit()[j]).collect()).collect();
    let t = PairingTable { left: l.parities().to_vec(), right: h.parities().to_vec(), values };
    assert!(check_hopf_pairing(&l, &h, &t, PairingConvention::Deformed).is_ok());
}

#[test]
fn duals_are_hopf_and_paired() {
    for conv in [PairingConvention::Deformed, PairingConvention::Ordinary] {
        let h = HopfData::exterior(Q, 3, "w");
        let d = dual_hopf(&h, conv);
        assert!(d.check_axioms().is_ok());
        let r = check_hopf_pairing(&d, &h, &canonical_pairing(&h), conv);
        assert!(r.is_ok(), "{conv}: {r}");
    }
}

#[test]
fn deformed_dual_is_sigma_twist_of_ordinary_dual() {
    for rank in 0..=3 {
        assert!(check_dual_comparison(&HopfData::exterior(Q, rank, "w")).is_ok());
    }
    let h = HopfData::exterior(Q, 2, "w");
    assert_ne!(dual_hopf(&h, PairingConvention::Deformed), dual_hopf(&h, PairingConvention::Ordinary));
}

#[test]
fn deformed_dual_of_exterior_is_exterior_of_dual() {
    // The deformed dual of ∧(W) matches ∧(W*) through p_S -> (-1)^{C(|S|,2)} v_S.
    let rank = 3;
    let h = HopfData::exterior(Q, rank, "w");
    let d = exterior_dual_names(&dual_hopf(&h, PairingConvention::Deformed), rank);
    let target = HopfData::exterior(Q, rank, "v");
    let n = h.dim();
    let mut map = identity(Q, n);
    for (s, row) in map.iter_mut().enumerate() {
        row[s] = sign(Q, binom2(s.count_ones() as usize) % 2 == 1);
    }
    let r = check_hopf_morphism(&d, &target, &map);
    assert!(r.is_ok(), "{r}");
}

#[test]
fn sigma_deformation_is_involutive() {
    let h = HopfData::exterior(Q, 3, "w");
    assert_eq!(sigma_deform_hopf(&sigma_deform_hopf(&h)), h);
    assert_ne!(sigma_deform_hopf(&h), h);
    let z2 = HopfData::group_algebra_z2(Q);
    assert_eq!(sigma_deform_hopf(&z2), z2);
}

#[test]
fn nu_isomorphism_over_f5() {
    let f5 = Field::prime(5).unwrap();
    let r = nu_isomorphism(&HopfData::exterior(f5, 2, "w")).unwrap();
    assert!(r.is_ok(), "{r}");
    assert!(nu_isomorphism(&HopfData::group_algebra_z2(f5)).unwrap().is_ok());
    assert!(matches!(nu_isomorphism(&HopfData::exterior(Q, 2, "w")), Err(Error::Unsupported(_))));
    // the identity map is not an isomorphism from the deformation
    let h = HopfData::exterior(f5, 2, "w");
    assert!(!check_hopf_morphism(&sigma_deform_hopf(&h), &h, &identity(f5, 4)).is_ok());
}

#[test]
fn gram_matrices_are_nondegenerate() {
    for rank in 0..=4 {
        for conv in [PairingConvention::Deformed, PairingConvention::Ordinary] {
            assert!(is_nondegenerate(&exterior_pairing_table(Q, rank, conv)));
        }
    }
    let mut t = exterior_pairing_table(Q, 2, PairingConvention::Deformed);
    t.values[3][3] = Q.zero();
    assert!(!is_nondegenerate(&t));
}

#[test]
fn sigma_comparison_identity() {
    let t = exterior_pairing_table(Q, 2, PairingConvention::Deformed);
    let r = check_sigma_comparison(&t, &t);
    assert!(r.is_ok(), "{r}");
    assert!(r.checked_count() > 0);
}

#[test]
fn group_map_on_products_of_factors() {
    let alg = GrassmannAlgebra::new(4, Q).unwrap();
    let t = |i| alg.generator(i);
    let rank = 2;
    let g1 = ExteriorOverA::single(rank, &t(0), 0);
    let g2 = ExteriorOverA::single(rank, &t(1), 1);
    let g3 = ExteriorOverA::single(rank, &t(2).add(&t(3)), 0);
    let samples = vec![g1.clone(), g2.clone(), g1.mul(&g2), g3.mul(&g2).mul(&g1), ExteriorOverA::one(rank, alg)];
    let r = check_group_map(&samples, PairingConvention::Deformed);
    assert!(r.is_ok(), "{r}");
    let r = check_group_map(&samples, PairingConvention::Ordinary);
    assert!(r.failed("group-map", "convolution"), "{r}");
}

#[test]
fn sum_of_two_odd_terms_is_not_grouplike() {
    let alg = GrassmannAlgebra::new(2, Q).unwrap();
    let g = ExteriorOverA::linear(2, alg, &[alg.generator(0), alg.generator(1)]);
    assert!(!g.is_grouplike());
    assert!(ExteriorOverA::single(2, &alg.generator(0), 1).is_grouplike());
}
