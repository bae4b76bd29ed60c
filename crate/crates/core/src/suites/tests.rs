use super::*;
use crate::fixture::bundled;

fn setup(name: &str) -> (Fixture, Gamma, GrassmannAlgebra) {
    let fx = bundled(name).unwrap();
    let gamma = Gamma::new(fx.pair.clone()).unwrap();
    let alg = GrassmannAlgebra::new(fx.grassmann_n(), fx.field()).unwrap();
    (fx, gamma, alg)
}

#[test]
fn grouplike_and_relation_suites_pass_on_osp() {
    let (_, gamma, alg) = setup("osp12");
    let r = grouplike_suite(&gamma, alg).unwrap();
    assert!(r.is_ok(), "{r}");
    // 4 odd parameters x 2 odd vectors + 6 even parameters x 3 even vectors, two conditions each
    assert_eq!(r.checked_count(), 2 * (8 + 18));
    let r = relation_suite(&gamma, alg).unwrap();
    assert!(r.is_ok(), "{r}");
    assert_eq!(r.condition(RELATION_SUITE, "odd-odd").unwrap().checked, 64);
    assert_eq!(r.condition(RELATION_SUITE, "even-even").unwrap().checked, 324);
}

#[test]
fn short_oracle_words_agree() {
    let (fx, gamma, alg) = setup("osp12");
    let r = oracle_suite(&fx, &gamma, alg, 2).unwrap();
    assert!(r.is_ok(), "{r}");
    // 3 generators + 8 odd letters
    assert_eq!(r.checked_count(), 11 + 121);
}

#[test]
fn theorem_suite_certifies_osp_sub_pairs() {
    let (fx, gamma, alg) = setup("osp12");
    let r = theorem_suite(&fx, &gamma, alg).unwrap();
    assert!(r.is_ok(), "{r}");
    let (center, r) = center_report(&fx, &gamma, alg).unwrap();
    assert_eq!(center.odd_dim(), 0);
    assert!(r.is_ok(), "{r}");
}

#[test]
fn duality_suite_passes() {
    let r = duality_suite().unwrap();
    assert!(r.is_ok(), "{r}");
    assert!(!r.failed(DUALITY_SUITE, "deformed-sign"));
}

#[test]
fn pairing_tables_differ_by_sign_on_degree_two() {
    let t = pairing_tables(Field::Rationals, 2);
    assert_eq!(t["deformed"][3][3], Field::Rationals.from_i64(-1));
    assert_eq!(t["ordinary"][3][3], Field::Rationals.one());
}

#[test]
fn condition_suite_passes_on_every_fixture() {
    for (name, _) in crate::fixture::BUNDLED {
        let (fx, gamma, alg) = setup(name);
        let r = condition_suite(&fx, &gamma, alg);
        assert!(r.is_ok(), "{name}: {r}");
    }
}
