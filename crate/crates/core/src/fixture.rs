//! JSON fixture documents: a ground field, a matrix group, a Harish-Chandra pair over it,
//! named sub-pairs, and an optional expected Lie superalgebra used as an integrity check.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::MatrixGroup;
use crate::hcp::{HCPair, Parametrization, SubPairData};
use crate::liesuper::{LieSpec, LieSuperAlgebra};
use crate::linalg::{Matrix, Vector};
use crate::poly::{group_variable_names, Polynomial, ScalarSpec};
use crate::scalar::Field;

pub type MatrixSpec = Vec<Vec<ScalarSpec>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub size: usize,
    /// Defining equations in `g11 .. gmm, d`; `d · det = 1` is implicit.
    #[serde(default)]
    pub equations: Vec<String>,
    /// Expected Lie algebra basis; computed from the equations when absent.
    #[serde(default)]
    pub lie_basis: Option<Vec<MatrixSpec>>,
    /// Points used as group letters by the exhaustive word oracle.
    #[serde(default)]
    pub generators: Vec<MatrixSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParametrizationSpec {
    pub params: Vec<String>,
    pub entries: Vec<Vec<String>>,
    pub det_inv: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub even: Vec<String>,
    pub odd: Vec<String>,
    /// Row `j` lists the coefficients of `v_j^g` in coordinate functions.
    pub rho: Vec<Vec<String>>,
    /// `bracket[j][k]` is `[v_j, v_k]` in coordinates of the even basis.
    pub bracket: Vec<Vec<Vec<ScalarSpec>>>,
    #[serde(default)]
    pub parametrization: Option<ParametrizationSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubPairSpec {
    pub name: String,
    /// Equations added to those of the group.
    #[serde(default)]
    pub equations: Vec<String>,
    #[serde(default)]
    pub parametrization: Option<ParametrizationSpec>,
    #[serde(default)]
    pub points: Vec<MatrixSpec>,
    /// Spanning vectors of `W`.
    #[serde(default)]
    pub odd_basis: Vec<Vec<ScalarSpec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureDocument {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub field: Field,
    #[serde(default = "default_grassmann_n")]
    pub grassmann_n: u32,
    pub group: GroupSpec,
    pub pair: PairSpec,
    /// The superalgebra the pair must assemble to.
    #[serde(default)]
    pub lie: Option<LieSpec>,
    #[serde(default)]
    pub sub_pairs: Vec<SubPairSpec>,
}

fn default_grassmann_n() -> u32 {
    4
}

/// A loaded and validated fixture.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub document: FixtureDocument,
    pub pair: HCPair,
    pub lie: LieSuperAlgebra,
    pub sub_pairs: Vec<SubPairData>,
    pub generators: Vec<Matrix>,
}

fn matrix(field: Field, spec: &MatrixSpec, size: usize) -> Result<Matrix> {
    if spec.len() != size || spec.iter().any(|r| r.len() != size) {
        return Err(Error::Parse(format!("expected a {size}x{size} matrix")));
    }
    spec.iter().map(|r| r.iter().map(|c| c.to_scalar(field)).collect()).collect()
}

fn vector(field: Field, spec: &[ScalarSpec]) -> Result<Vector> {
    spec.iter().map(|c| c.to_scalar(field)).collect()
}

fn parametrization(field: Field, spec: &ParametrizationSpec) -> Result<Parametrization> {
    let p = |t: &String| Polynomial::parse(field, &spec.params, t);
    let entries = spec.entries.iter().map(|r| r.iter().map(p).collect()).collect::<Result<_>>()?;
    Parametrization::new(spec.params.clone(), entries, p(&spec.det_inv)?)
}

impl Fixture {
    pub fn from_document(document: FixtureDocument) -> Result<Fixture> {
        let field = document.field;
        let gs = &document.group;
        let names = group_variable_names(gs.size);
        let gpoly = |t: &String| Polynomial::parse(field, &names, t);
        let equations = gs.equations.iter().map(gpoly).collect::<Result<Vec<_>>>()?;
        let lie_basis = match &gs.lie_basis {
            None => None,
            Some(b) => Some(b.iter().map(|m| matrix(field, m, gs.size)).collect::<Result<Vec<_>>>()?),
        };
        let group = MatrixGroup::new(field, gs.size, equations, lie_basis)?;
        let generators = gs.generators.iter().map(|m| matrix(field, m, gs.size)).collect::<Result<Vec<_>>>()?;
        for (k, m) in generators.iter().enumerate() {
            let alg = crate::grassmann::GrassmannAlgebra::new(0, field)?;
            group
                .point_from_scalars(alg, m)
                .map_err(|e| Error::Precondition(format!("generator {k} is not a point of the group: {e}")))?;
        }

        let ps = &document.pair;
        let rho = ps.rho.iter().map(|r| r.iter().map(gpoly).collect()).collect::<Result<Vec<Vec<_>>>>()?;
        let bracket =
            ps.bracket.iter().map(|r| r.iter().map(|v| vector(field, v)).collect()).collect::<Result<Vec<Vec<_>>>>()?;
        let param = ps.parametrization.as_ref().map(|p| parametrization(field, p)).transpose()?;
        let pair = HCPair::new(group, ps.even.clone(), ps.odd.clone(), rho, bracket, param)?;
        let lie = pair.assemble_lie()?;
        if let Some(spec) = &document.lie {
            let expected = spec.build(field)?;
            if expected != lie {
                return Err(Error::Precondition(format!(
                    "fixture '{}': the pair does not assemble to the declared superalgebra",
                    document.name
                )));
            }
        }

        let mut sub_pairs = Vec::new();
        for s in &document.sub_pairs {
            let eqs = s.equations.iter().map(gpoly).collect::<Result<Vec<_>>>()?;
            let param = s.parametrization.as_ref().map(|p| parametrization(field, p)).transpose()?;
            let points = s.points.iter().map(|m| matrix(field, m, gs.size)).collect::<Result<Vec<_>>>()?;
            let odd = s.odd_basis.iter().map(|v| vector(field, v)).collect::<Result<Vec<_>>>()?;
            let sub = SubPairData::new(&pair, s.name.clone(), eqs, param, points, odd)?;
            let report = sub.check(&pair);
            if !report.is_ok() {
                return Err(Error::Precondition(format!(
                    "sub-pair '{}' is invalid: {}",
                    s.name,
                    report.failing_conditions().join(", ")
                )));
            }
            sub_pairs.push(sub);
        }
        Ok(Fixture { document, pair, lie, sub_pairs, generators })
    }

    pub fn from_json_str(text: &str) -> Result<Fixture> {
        let doc: FixtureDocument = serde_json::from_str(text).map_err(|e| Error::Parse(format!("fixture JSON: {e}")))?;
        Fixture::from_document(doc)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Fixture> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Fixture::from_json_str(&text)
    }

    pub fn name(&self) -> &str {
        &self.document.name
    }

    pub fn field(&self) -> Field {
        self.document.field
    }

    pub fn grassmann_n(&self) -> u32 {
        self.document.grassmann_n
    }

    pub fn sub_pair(&self, name: &str) -> Option<&SubPairData> {
        self.sub_pairs.iter().find(|s| s.name() == name)
    }
}

/// Fixtures shipped with the crate, by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("osp12", include_str!("../fixtures/osp12.json")),
    ("gl11", include_str!("../fixtures/gl11.json")),
    ("torus2", include_str!("../fixtures/torus2.json")),
    ("abelian", include_str!("../fixtures/abelian.json")),
    ("osp12-f7", include_str!("../fixtures/osp12-f7.json")),
    ("trivial", include_str!("../fixtures/trivial.json")),
];

pub fn bundled(name: &str) -> Result<Fixture> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Parse(format!("no bundled fixture named '{name}'")))?;
    Fixture::from_json_str(text)
}

pub fn all_bundled() -> Result<Vec<Fixture>> {
    BUNDLED.iter().map(|(_, text)| Fixture::from_json_str(text)).collect()
}

#[cfg(test)]
mod tests;
