use super::*;
use crate::grassmann::GrassmannAlgebra;

#[test]
fn bundled_fixtures_load_and_pass_their_checks() {
    for (name, _) in BUNDLED {
        let fx = bundled(name).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(fx.name(), *name);
        let alg = GrassmannAlgebra::new(fx.grassmann_n(), fx.field()).unwrap();
        let report = fx.pair.check_all(alg);
        assert!(report.is_ok(), "{name}: {:?}", report.failing_conditions());
    }
}

#[test]
fn dimensions_of_bundled_fixtures() {
    let dims: Vec<(usize, usize, usize)> = BUNDLED
        .iter()
        .map(|(n, _)| bundled(n).unwrap())
        .map(|fx| (fx.pair.lie_dim(), fx.pair.odd_dim(), fx.sub_pairs.len()))
        .collect();
    assert_eq!(dims, vec![(3, 2, 4), (2, 2, 3), (2, 2, 3), (1, 2, 1), (3, 2, 4), (0, 0, 0)]);
}

#[test]
fn osp_fixture_matches_declared_superalgebra() {
    let fx = bundled("osp12").unwrap();
    assert_eq!(fx.lie, crate::liesuper::tests::osp12(Field::Rationals));
    assert_eq!(fx.sub_pair("borel").unwrap().odd_basis().len(), 1);
    assert!(fx.sub_pair("missing").is_none());
}

#[test]
fn declared_superalgebra_mismatch_is_rejected() {
    let mut doc: FixtureDocument = serde_json::from_str(BUNDLED[0].1).unwrap();
    doc.lie.as_mut().unwrap().brackets[0].3 = ScalarSpec::Int(3);
    assert!(matches!(Fixture::from_document(doc), Err(Error::Precondition(_))));
}

#[test]
fn invalid_sub_pair_is_rejected() {
    let mut doc: FixtureDocument = serde_json::from_str(BUNDLED[0].1).unwrap();
    // the lower odd vector is not stable under the upper Borel subgroup
    doc.sub_pairs[0].odd_basis = vec![vec![ScalarSpec::Int(0), ScalarSpec::Int(1)]];
    assert!(matches!(Fixture::from_document(doc), Err(Error::Precondition(_))));
}

#[test]
fn malformed_documents_are_parse_errors() {
    assert!(matches!(Fixture::from_json_str("{"), Err(Error::Parse(_))));
    let mut doc: FixtureDocument = serde_json::from_str(BUNDLED[0].1).unwrap();
    doc.pair.rho[0][0] = "d*q22".into();
    assert!(matches!(Fixture::from_document(doc), Err(Error::Parse(_))));
    assert!(matches!(bundled("nope"), Err(Error::Parse(_))));
    assert!(Fixture::load("/nonexistent/fixture.json").unwrap_err().is_parse());
}

#[test]
fn generator_outside_the_group_is_rejected() {
    let mut doc: FixtureDocument = serde_json::from_str(BUNDLED[0].1).unwrap();
    doc.group.generators.push(vec![vec![ScalarSpec::Int(2), ScalarSpec::Int(0)], vec![ScalarSpec::Int(0), ScalarSpec::Int(1)]]);
    assert!(matches!(Fixture::from_document(doc), Err(Error::Precondition(_))));
}
