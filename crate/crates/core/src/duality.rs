//! Hopf pairings between exterior algebras, finite-dimensional Hopf superalgebras as explicit
//! structure tables, dual Hopf superalgebras under both tensor conventions, and the
//! cocycle deformation by `σ(i, j) = (-1)^{ij}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{merge_sign, GrassmannAlgebra, GrassmannElement};
use crate::linalg::{determinant, zero_vector, Matrix, Vector};
use crate::parity::Parity;
use crate::report::Report;
use crate::scalar::{sign, Field, Scalar};

/// Elements of `∧(W)` for a free module `W` with a chosen basis: the Grassmann algebra whose
/// generators are that basis.
pub type ExteriorElement = GrassmannElement;

/// The sign rule used for tensor products of pairings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingConvention {
    /// `⟨m ⊗ m', n ⊗ n'⟩ = (-1)^{|m'||n|} ⟨m, n⟩⟨m', n'⟩`.
    Deformed,
    /// `⟨m ⊗ m', n ⊗ n'⟩ = ⟨m, n⟩⟨m', n'⟩`.
    Ordinary,
}

impl fmt::Display for PairingConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairingConvention::Deformed => "deformed",
            PairingConvention::Ordinary => "ordinary",
        })
    }
}

impl std::str::FromStr for PairingConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "deformed" => Ok(PairingConvention::Deformed),
            "ordinary" => Ok(PairingConvention::Ordinary),
            other => Err(Error::Parse(format!("unknown pairing convention '{other}'"))),
        }
    }
}

/// `n choose 2`, which is zero for `n = 0, 1`.
pub fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn wedge_sign(field: Field, n: usize, conv: PairingConvention) -> Scalar {
    match conv {
        PairingConvention::Deformed => sign(field, binom2(n) % 2 == 1),
        PairingConvention::Ordinary => field.one(),
    }
}

/// Pairs `ξ ∈ ∧(W*)` with `ω ∈ ∧(W)`, both written in dual bases.
pub fn ext_pairing(xi: &ExteriorElement, omega: &ExteriorElement, conv: PairingConvention) -> Result<Scalar> {
    let (a, b) = (xi.algebra(), omega.algebra());
    if a.generators() != b.generators() {
        return Err(Error::Dimension(format!(
            "pairing ∧ of a rank-{} module with ∧ of a rank-{} module",
            a.generators(),
            b.generators()
        )));
    }
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(format!("{} vs {}", a.field(), b.field())));
    }
    let f = a.field();
    let mut out = f.zero();
    for (mask, c) in xi.terms() {
        let d = omega.coefficient(mask);
        if !d.is_zero() {
            out += &(&(c * &d) * &wedge_sign(f, mask.count_ones() as usize, conv));
        }
    }
    Ok(out)
}

/// `v_1 ∧ ... ∧ v_n` for coordinate vectors `v_i` of length `alg.generators()`.
pub fn wedge_of_vectors(alg: GrassmannAlgebra, vectors: &[Vector]) -> Result<ExteriorElement> {
    let mut out = alg.one();
    for v in vectors {
        if v.len() != alg.generators() as usize {
            return Err(Error::Dimension(format!("vector of length {} in rank {}", v.len(), alg.generators())));
        }
        let mut lin = alg.zero();
        for (i, c) in v.iter().enumerate() {
            lin.add_term(1u64 << i, c);
        }
        out = out.mul(&lin);
    }
    Ok(out)
}

/// `δ_{n,m} (±1) det(v_i(w_j))`, evaluating functionals on vectors through the dual bases.
pub fn determinant_pairing(field: Field, vs: &[Vector], ws: &[Vector], conv: PairingConvention) -> Result<Scalar> {
    if vs.len() != ws.len() {
        return Ok(field.zero());
    }
    let n = vs.len();
    let mut m: Matrix = Vec::with_capacity(n);
    for v in vs {
        let mut row = Vec::with_capacity(n);
        for w in ws {
            if v.len() != w.len() {
                return Err(Error::Dimension("functional and vector of different lengths".into()));
            }
            let mut s = field.zero();
            for (a, b) in v.iter().zip(w) {
                s += &(a * b);
            }
            row.push(s);
        }
        m.push(row);
    }
    Ok(&wedge_sign(field, n, conv) * &determinant(field, &m))
}

/// `⟨m ⊗ m', n ⊗ n'⟩` from the component values `⟨m, n⟩`, `⟨m', n'⟩` and the crossing parities.
pub fn tensor_pairing(
    conv: PairingConvention,
    first: &Scalar,
    second: &Scalar,
    m_prime: Parity,
    n: Parity,
) -> Scalar {
    let prod = first * second;
    match conv {
        PairingConvention::Deformed if m_prime.is_odd() && n.is_odd() => -prod,
        _ => prod,
    }
}

/// A bilinear pairing between two graded spaces, given on bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingTable {
    pub left: Vec<Parity>,
    pub right: Vec<Parity>,
    /// `values[i][j] = ⟨e_i, f_j⟩`.
    pub values: Matrix,
}

impl PairingTable {
    pub fn pair(&self, x: &[Scalar], h: &[Scalar]) -> Scalar {
        let f = self.field();
        let mut out = f.zero();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in h.iter().enumerate() {
                if !b.is_zero() && !self.values[i][j].is_zero() {
                    out += &(&(a * b) * &self.values[i][j]);
                }
            }
        }
        out
    }

    fn field(&self) -> Field {
        self.values.first().and_then(|r| r.first()).map(|c| c.field()).unwrap_or(Field::Rationals)
    }

    /// Tensor pairing of `Σ x[(i, i')] e_i ⊗ e_i'` with `Σ y[(j, j')] f_j ⊗ f_j'`, extended bilinearly.
    pub fn tensor_pair(
        &self,
        second: &PairingTable,
        conv: PairingConvention,
        x: &BTreeMap<(usize, usize), Scalar>,
        y: &BTreeMap<(usize, usize), Scalar>,
    ) -> Scalar {
        let f = self.field();
        let mut out = f.zero();
        for ((i, i2), a) in x {
            for ((j, j2), b) in y {
                let v = tensor_pairing(conv, &self.values[*i][*j], &second.values[*i2][*j2], second.left[*i2], self.right[*j]);
                if !v.is_zero() {
                    out += &(&(a * b) * &v);
                }
            }
        }
        out
    }
}

fn mask_parity(mask: usize) -> Parity {
    Parity::from_bit(mask.count_ones())
}

/// The pairing table of `∧(W*) × ∧(W)` on the subset bases, `dim W = rank`.
pub fn exterior_pairing_table(field: Field, rank: usize, conv: PairingConvention) -> PairingTable {
    let n = 1usize << rank;
    let parities: Vec<Parity> = (0..n).map(mask_parity).collect();
    let mut values = vec![zero_vector(field, n); n];
    for (s, row) in values.iter_mut().enumerate() {
        row[s] = wedge_sign(field, s.count_ones() as usize, conv);
    }
    PairingTable { left: parities.clone(), right: parities, values }
}

/// Whether the Gram matrix of the pairing on full wedge bases is invertible.
pub fn is_nondegenerate(table: &PairingTable) -> bool {
    let f = table.field();
    table.values.len() == table.right.len() && !determinant(f, &table.values).is_zero()
}

/// A finite-dimensional Hopf superalgebra over a field, stored as structure tables on a
/// homogeneous basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfData {
    field: Field,
    names: Vec<String>,
    parities: Vec<Parity>,
    /// `product[i][j]` = coordinates of `e_i e_j`.
    product: Vec<Vec<Vector>>,
    unit: Vector,
    /// `coproduct[k][i][j]` = coefficient of `e_i ⊗ e_j` in `Δ(e_k)`.
    coproduct: Vec<Matrix>,
    counit: Vector,
    /// `antipode[i]` = coordinates of `S(e_i)`.
    antipode: Matrix,
}

type Tensor2 = BTreeMap<(usize, usize), Scalar>;

fn t2_add(acc: &mut Tensor2, key: (usize, usize), c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(key).or_insert_with(|| c.field().zero());
    *e += c;
    if e.is_zero() {
        acc.remove(&key);
    }
}

fn sparse(v: &[Scalar]) -> impl Iterator<Item = (usize, &Scalar)> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero())
}

impl HopfData {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: Field,
        names: Vec<String>,
        parities: Vec<Parity>,
        product: Vec<Vec<Vector>>,
        unit: Vector,
        coproduct: Vec<Matrix>,
        counit: Vector,
        antipode: Matrix,
    ) -> Result<HopfData> {
        let n = names.len();
        let ok = parities.len() == n
            && unit.len() == n
            && counit.len() == n
            && product.len() == n
            && product.iter().all(|r| r.len() == n && r.iter().all(|v| v.len() == n))
            && coproduct.len() == n
            && coproduct.iter().all(|m| m.len() == n && m.iter().all(|r| r.len() == n))
            && antipode.len() == n
            && antipode.iter().all(|r| r.len() == n);
        if !ok {
            return Err(Error::Dimension(format!("inconsistent Hopf tables for a {n}-dimensional space")));
        }
        Ok(HopfData { field, names, parities, product, unit, coproduct, counit, antipode })
    }

    /// `∧(W)` for `W` of rank `rank` with basis named `{prefix}1, ...`; basis vectors are odd primitives.
    pub fn exterior(field: Field, rank: usize, prefix: &str) -> HopfData {
        let n = 1usize << rank;
        let names = (0..n)
            .map(|s| {
                if s == 0 {
                    "1".to_string()
                } else {
                    (0..rank).filter(|i| s >> i & 1 == 1).map(|i| format!("{prefix}{}", i + 1)).collect::<Vec<_>>().join("^")
                }
            })
            .collect();
        let parities = (0..n).map(mask_parity).collect();
        let mut product = vec![vec![zero_vector(field, n); n]; n];
        let mut coproduct = vec![vec![zero_vector(field, n); n]; n];
        let mut antipode = vec![zero_vector(field, n); n];
        for s in 0..n {
            for t in 0..n {
                if s & t == 0 {
                    product[s][t][s | t] = sign(field, merge_sign(s as u64, t as u64));
                }
            }
            let mut t = s;
            loop {
                let rest = s & !t;
                coproduct[s][t][rest] = sign(field, merge_sign(t as u64, rest as u64));
                if t == 0 {
                    break;
                }
                t = (t - 1) & s;
            }
            let k = s.count_ones() as usize;
            antipode[s][s] = sign(field, k % 2 == 1);
        }
        let unit = crate::linalg::unit_vector(field, n, 0);
        HopfData { field, names, parities, product, unit: unit.clone(), coproduct, counit: unit, antipode }
    }

    /// The one-dimensional Hopf algebra `k`.
    pub fn ground(field: Field) -> HopfData {
        let one = vec![field.one()];
        HopfData {
            field,
            names: vec!["1".into()],
            parities: vec![Parity::Even],
            product: vec![vec![one.clone()]],
            unit: one.clone(),
            coproduct: vec![vec![one.clone()]],
            counit: one.clone(),
            antipode: vec![one],
        }
    }

    /// The group algebra of `Z/2` (purely even), with grouplikes `1` and `g`.
    pub fn group_algebra_z2(field: Field) -> HopfData {
        let z = field.zero();
        let o = field.one();
        let e = |a: &Scalar, b: &Scalar| vec![a.clone(), b.clone()];
        let product = vec![vec![e(&o, &z), e(&z, &o)], vec![e(&z, &o), e(&o, &z)]];
        let coproduct = vec![vec![e(&o, &z), e(&z, &z)], vec![e(&z, &z), e(&z, &o)]];
        HopfData {
            field,
            names: vec!["1".into(), "g".into()],
            parities: vec![Parity::Even, Parity::Even],
            product,
            unit: e(&o, &z),
            coproduct,
            counit: e(&o, &o),
            antipode: vec![e(&o, &z), e(&z, &o)],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn counit(&self) -> &Vector {
        &self.counit
    }

    pub fn product_table(&self) -> &[Vec<Vector>] {
        &self.product
    }

    pub fn coproduct_table(&self) -> &[Matrix] {
        &self.coproduct
    }

    pub fn antipode_table(&self) -> &Matrix {
        &self.antipode
    }

    pub fn basis(&self, i: usize) -> Vector {
        crate::linalg::unit_vector(self.field, self.dim(), i)
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.field, self.dim());
        for (i, a) in sparse(x) {
            for (j, b) in sparse(y) {
                crate::linalg::axpy(&mut out, &(a * b), &self.product[i][j]);
            }
        }
        out
    }

    pub fn coproduct(&self, x: &[Scalar]) -> Tensor2 {
        let mut out = Tensor2::new();
        for (k, a) in sparse(x) {
            for (i, row) in self.coproduct[k].iter().enumerate() {
                for (j, c) in sparse(row) {
                    t2_add(&mut out, (i, j), &(a * c));
                }
            }
        }
        out
    }

    pub fn apply_counit(&self, x: &[Scalar]) -> Scalar {
        let mut out = self.field.zero();
        for (i, a) in sparse(x) {
            out += &(a * &self.counit[i]);
        }
        out
    }

    pub fn apply_antipode(&self, x: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.field, self.dim());
        for (i, a) in sparse(x) {
            crate::linalg::axpy(&mut out, a, &self.antipode[i]);
        }
        out
    }

    /// Product in `H ⊗ H`: `(a ⊗ b)(c ⊗ d) = (-1)^{|b||c|} ac ⊗ bd`.
    fn tensor_mul(&self, x: &Tensor2, y: &Tensor2) -> Tensor2 {
        let mut out = Tensor2::new();
        for ((a, b), c1) in x {
            for ((c, d), c2) in y {
                let s = sign(self.field, self.parities[*b].koszul(self.parities[*c]));
                let coeff = &s * &(c1 * c2);
                for (p, u) in sparse(&self.product[*a][*c]) {
                    for (q, w) in sparse(&self.product[*b][*d]) {
                        t2_add(&mut out, (p, q), &(&coeff * &(u * w)));
                    }
                }
            }
        }
        out
    }

    /// Checks the Hopf superalgebra axioms on all basis elements (suite `hopf`).
    pub fn check_axioms(&self) -> Report {
        const SUITE: &str = "hopf";
        let mut r = Report::new();
        let n = self.dim();
        let f = self.field;
        let par = &self.parities;
        for i in 0..n {
            let ei = self.basis(i);
            let pi = par[i];
            let even = sparse(&self.antipode[i]).all(|(k, _)| par[k] == pi)
                && self.coproduct[i].iter().enumerate().all(|(a, row)| sparse(row).all(|(b, _)| par[a] + par[b] == pi))
                && (self.counit[i].is_zero() || pi == Parity::Even);
            r.record(SUITE, "even-structure-maps", even, || format!("basis {}", self.names[i]));
            r.record(SUITE, "unit", self.mul(&self.unit, &ei) == ei && self.mul(&ei, &self.unit) == ei, || self.names[i].clone());
            // counit: (ε ⊗ id)Δ = id = (id ⊗ ε)Δ
            let mut left = zero_vector(f, n);
            let mut right = zero_vector(f, n);
            for ((a, b), c) in self.coproduct(&ei) {
                left[b] += &(&c * &self.counit[a]);
                right[a] += &(&c * &self.counit[b]);
            }
            r.record(SUITE, "counit", left == ei && right == ei, || self.names[i].clone());
            // coassociativity
            let d = self.coproduct(&ei);
            let mut l3: BTreeMap<[usize; 3], Scalar> = BTreeMap::new();
            let mut r3: BTreeMap<[usize; 3], Scalar> = BTreeMap::new();
            for ((a, b), c) in &d {
                for ((p, q), c2) in self.coproduct(&self.basis(*a)) {
                    *l3.entry([p, q, *b]).or_insert_with(|| f.zero()) += &(c * &c2);
                }
                for ((p, q), c2) in self.coproduct(&self.basis(*b)) {
                    *r3.entry([*a, p, q]).or_insert_with(|| f.zero()) += &(c * &c2);
                }
            }
            l3.retain(|_, v| !v.is_zero());
            r3.retain(|_, v| !v.is_zero());
            r.record(SUITE, "coassociativity", l3 == r3, || self.names[i].clone());
            // antipode: m(S ⊗ id)Δ = ηε = m(id ⊗ S)Δ
            let target = crate::linalg::scale_vector(&self.counit[i], &self.unit);
            let mut sl = zero_vector(f, n);
            let mut sr = zero_vector(f, n);
            for ((a, b), c) in &d {
                crate::linalg::axpy(&mut sl, c, &self.mul(&self.antipode[*a], &self.basis(*b)));
                crate::linalg::axpy(&mut sr, c, &self.mul(&self.basis(*a), &self.antipode[*b]));
            }
            r.record(SUITE, "antipode", sl == target && sr == target, || self.names[i].clone());
            for j in 0..n {
                let ej = self.basis(j);
                let ij = self.mul(&ei, &ej);
                let parity_ok = sparse(&ij).all(|(k, _)| par[k] == pi + par[j]);
                r.record(SUITE, "even-product", parity_ok, || format!("{} * {}", self.names[i], self.names[j]));
                for k in 0..n {
                    let lhs = self.mul(&ij, &self.basis(k));
                    let rhs = self.mul(&ei, &self.product[j][k]);
                    r.record(SUITE, "associativity", lhs == rhs, || {
                        format!("({} {}) {}", self.names[i], self.names[j], self.names[k])
                    });
                }
                let delta_prod = self.coproduct(&ij);
                let prod_delta = self.tensor_mul(&self.coproduct(&ei), &self.coproduct(&ej));
                r.record(SUITE, "coproduct-multiplicative", delta_prod == prod_delta, || {
                    format!("{} * {}", self.names[i], self.names[j])
                });
                let counit_ok = self.apply_counit(&ij) == &self.counit[i] * &self.counit[j];
                r.record(SUITE, "counit-multiplicative", counit_ok, || format!("{} * {}", self.names[i], self.names[j]));
            }
        }
        let unit_ok = self.coproduct(&self.unit) == self.unit_tensor_square() && self.apply_counit(&self.unit).is_one();
        r.record(SUITE, "unit-grouplike", unit_ok, || "Δ(1) = 1 ⊗ 1, ε(1) = 1".into());
        r
    }

    fn unit_tensor_square(&self) -> Tensor2 {
        let mut out = Tensor2::new();
        for (i, a) in sparse(&self.unit) {
            for (j, b) in sparse(&self.unit) {
                t2_add(&mut out, (i, j), &(a * b));
            }
        }
        out
    }

    fn with_names(mut self, names: Vec<String>) -> HopfData {
        self.names = names;
        self
    }
}

fn sigma(field: Field, a: Parity, b: Parity) -> Scalar {
    sign(field, a.koszul(b))
}

fn convention_sign(field: Field, conv: PairingConvention, a: Parity, b: Parity) -> Scalar {
    match conv {
        PairingConvention::Deformed => sigma(field, a, b),
        PairingConvention::Ordinary => field.one(),
    }
}

/// The dual Hopf superalgebra `H*` on the dual basis, defined so the canonical pairing
/// `H* × H` is a Hopf pairing for the chosen tensor convention.
pub fn dual_hopf(h: &HopfData, conv: PairingConvention) -> HopfData {
    let n = h.dim();
    let f = h.field;
    let par = &h.parities;
    let mut product = vec![vec![zero_vector(f, n); n]; n];
    let mut coproduct = vec![vec![zero_vector(f, n); n]; n];
    for i in 0..n {
        for j in 0..n {
            let s = convention_sign(f, conv, par[i], par[j]);
            for k in 0..n {
                let c = &h.coproduct[k][i][j];
                if !c.is_zero() {
                    product[i][j][k] = &s * c;
                }
                let p = &h.product[i][j][k];
                if !p.is_zero() {
                    coproduct[k][i][j] = &s * p;
                }
            }
        }
    }
    let antipode = crate::linalg::transpose(f, &h.antipode, n);
    let names = h.names.iter().map(|s| format!("{s}*")).collect();
    HopfData {
        field: f,
        names,
        parities: par.clone(),
        product,
        unit: h.counit.clone(),
        coproduct,
        counit: h.unit.clone(),
        antipode,
    }
}

/// Twists product and coproduct by `σ(|a|, |b|) = (-1)^{|a||b|}`; the antipode is unchanged.
pub fn sigma_deform_hopf(h: &HopfData) -> HopfData {
    let mut out = h.clone();
    let n = h.dim();
    for i in 0..n {
        for j in 0..n {
            if h.parities[i].is_odd() && h.parities[j].is_odd() {
                for k in 0..n {
                    out.product[i][j][k] = -&h.product[i][j][k];
                    out.coproduct[k][i][j] = -&h.coproduct[k][i][j];
                }
            }
        }
    }
    out
}

/// Checks that `table` is a Hopf pairing `L × H -> k` under `conv` (suite `hopf-pairing`).
pub fn check_hopf_pairing(l: &HopfData, h: &HopfData, table: &PairingTable, conv: PairingConvention) -> Report {
    const SUITE: &str = "hopf-pairing";
    let mut r = Report::new();
    let (nl, nh) = (l.dim(), h.dim());
    if table.values.len() != nl || table.values.iter().any(|row| row.len() != nh) {
        r.record(SUITE, "shape", false, || format!("table is not {nl} x {nh}"));
        return r;
    }
    for i in 0..nl {
        for j in 0..nh {
            let ok = table.values[i][j].is_zero() || l.parities[i] == h.parities[j];
            r.record(SUITE, "even-pairing", ok, || format!("⟨{}, {}⟩", l.names[i], h.names[j]));
        }
    }
    for i in 0..nl {
        let x = l.basis(i);
        let dx = l.coproduct(&x);
        for j in 0..nh {
            for k in 0..nh {
                let hk = h.mul(&h.basis(j), &h.basis(k));
                let lhs = table.pair(&x, &hk);
                let rhs = table.tensor_pair(table, conv, &dx, &Tensor2::from([((j, k), h.field.one())]));
                r.record(SUITE, "product-dual-to-coproduct", lhs == rhs, || {
                    format!("⟨{}, {} {}⟩: {lhs} vs {rhs}", l.names[i], h.names[j], h.names[k])
                });
            }
        }
        r.record(SUITE, "unit-dual-to-counit", table.pair(&x, &h.unit) == l.counit[i], || l.names[i].clone());
        for j in 0..nh {
            let y = h.basis(j);
            let lhs = table.pair(&l.apply_antipode(&x), &y);
            let rhs = table.pair(&x, &h.apply_antipode(&y));
            r.record(SUITE, "antipode", lhs == rhs, || format!("{} , {}", l.names[i], h.names[j]));
        }
    }
    for j in 0..nh {
        let y = h.basis(j);
        let dy = h.coproduct(&y);
        for i in 0..nl {
            for k in 0..nl {
                let xy = l.mul(&l.basis(i), &l.basis(k));
                let lhs = table.pair(&xy, &y);
                let rhs = table.tensor_pair(table, conv, &Tensor2::from([((i, k), l.field.one())]), &dy);
                r.record(SUITE, "coproduct-dual-to-product", lhs == rhs, || {
                    format!("⟨{} {}, {}⟩: {lhs} vs {rhs}", l.names[i], l.names[k], h.names[j])
                });
            }
        }
        r.record(SUITE, "counit-dual-to-unit", table.pair(&l.unit, &y) == h.counit[j], || h.names[j].clone());
    }
    r
}

/// The canonical pairing `H* × H`: the identity matrix on dual bases.
pub fn canonical_pairing(h: &HopfData) -> PairingTable {
    let n = h.dim();
    PairingTable {
        left: h.parities.clone(),
        right: h.parities.clone(),
        values: crate::linalg::identity(h.field, n),
    }
}

/// Checks that `map` (row `i` = image of `src` basis vector `i`) is a Hopf superalgebra
/// morphism `src -> dst` (suite `hopf-morphism`).
pub fn check_hopf_morphism(src: &HopfData, dst: &HopfData, map: &Matrix) -> Report {
    const SUITE: &str = "hopf-morphism";
    let mut r = Report::new();
    let apply = |x: &[Scalar]| -> Vector {
        let mut out = zero_vector(dst.field, dst.dim());
        for (i, a) in sparse(x) {
            crate::linalg::axpy(&mut out, a, &map[i]);
        }
        out
    };
    let apply2 = |t: &Tensor2| -> Tensor2 {
        let mut out = Tensor2::new();
        for ((a, b), c) in t {
            for (p, u) in sparse(&map[*a]) {
                for (q, w) in sparse(&map[*b]) {
                    t2_add(&mut out, (p, q), &(c * &(u * w)));
                }
            }
        }
        out
    };
    r.record(SUITE, "unit", apply(&src.unit) == dst.unit, || "unit".into());
    for i in 0..src.dim() {
        let x = src.basis(i);
        let fx = apply(&x);
        let even = sparse(&fx).all(|(k, _)| dst.parities[k] == src.parities[i]);
        r.record(SUITE, "even", even, || src.names[i].clone());
        r.record(SUITE, "counit", dst.apply_counit(&fx) == src.counit[i], || src.names[i].clone());
        r.record(SUITE, "coproduct", dst.coproduct(&fx) == apply2(&src.coproduct(&x)), || src.names[i].clone());
        r.record(SUITE, "antipode", dst.apply_antipode(&fx) == apply(&src.apply_antipode(&x)), || src.names[i].clone());
        for j in 0..src.dim() {
            let y = src.basis(j);
            let ok = apply(&src.mul(&x, &y)) == dst.mul(&fx, &apply(&y));
            r.record(SUITE, "product", ok, || format!("{} * {}", src.names[i], src.names[j]));
        }
    }
    r
}

/// Verifies that `v -> ν(|v|) v` with `ν(0) = 1`, `ν(1) = √-1` is a Hopf isomorphism from the
/// `σ`-deformation of `h` to `h`.
pub fn nu_isomorphism(h: &HopfData) -> Result<Report> {
    let f = h.field;
    let i = f
        .sqrt_minus_one()
        .ok_or_else(|| Error::Unsupported(format!("{f} has no square root of -1")))?;
    let n = h.dim();
    let mut map = vec![zero_vector(f, n); n];
    for (k, row) in map.iter_mut().enumerate() {
        row[k] = if h.parities[k].is_odd() { i.clone() } else { f.one() };
    }
    Ok(check_hopf_morphism(&sigma_deform_hopf(h), h, &map))
}

/// On every homogeneous basis tuple, the deformed tensor pairing equals the ordinary one after
/// twisting either side by `σ` (suite `sigma-comparison`).
pub fn check_sigma_comparison(first: &PairingTable, second: &PairingTable) -> Report {
    const SUITE: &str = "sigma-comparison";
    let mut r = Report::new();
    let f = first.field();
    for (v, pv) in first.left.iter().enumerate() {
        for (w, pw) in second.left.iter().enumerate() {
            for (v2, pv2) in first.right.iter().enumerate() {
                for (w2, pw2) in second.right.iter().enumerate() {
                    let (a, b) = (&first.values[v][v2], &second.values[w][w2]);
                    let deformed = tensor_pairing(PairingConvention::Deformed, a, b, *pw, *pv2);
                    let ordinary = tensor_pairing(PairingConvention::Ordinary, a, b, *pw, *pv2);
                    let left_twist = &sigma(f, *pv, *pw) * &ordinary;
                    let right_twist = &sigma(f, *pv2, *pw2) * &ordinary;
                    r.record(SUITE, "left-twist", deformed == left_twist, || format!("({v},{w}),({v2},{w2})"));
                    r.record(SUITE, "right-twist", deformed == right_twist, || format!("({v},{w}),({v2},{w2})"));
                }
            }
        }
    }
    r
}

/// The dual under the deformed convention coincides with the `σ`-deformation of the dual under
/// the ordinary convention.
pub fn check_dual_comparison(h: &HopfData) -> Report {
    let mut r = Report::new();
    let deformed = dual_hopf(h, PairingConvention::Deformed);
    let twisted = sigma_deform_hopf(&dual_hopf(h, PairingConvention::Ordinary));
    r.record("sigma-comparison", "dual-algebras", deformed == twisted, || "tables differ".into());
    r
}

/// Elements of `∧(W*)_A = A ⊗ ∧(W*)`, stored as `Σ a_S ⊗ v_S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorOverA {
    rank: usize,
    alg: GrassmannAlgebra,
    terms: BTreeMap<u64, GrassmannElement>,
}

impl ExteriorOverA {
    pub fn one(rank: usize, alg: GrassmannAlgebra) -> ExteriorOverA {
        ExteriorOverA { rank, alg, terms: BTreeMap::from([(0, alg.one())]) }
    }

    /// `1 + a ⊗ v_i`.
    pub fn single(rank: usize, a: &GrassmannElement, i: usize) -> ExteriorOverA {
        let mut out = ExteriorOverA::one(rank, a.algebra());
        out.add_term(1u64 << i, a);
        out
    }

    /// `1 + Σ a_i ⊗ v_i`.
    pub fn linear(rank: usize, alg: GrassmannAlgebra, coeffs: &[GrassmannElement]) -> ExteriorOverA {
        let mut out = ExteriorOverA::one(rank, alg);
        for (i, a) in coeffs.iter().enumerate() {
            out.add_term(1u64 << i, a);
        }
        out
    }

    fn add_term(&mut self, mask: u64, a: &GrassmannElement) {
        if a.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(|| self.alg.zero());
        *e = e.add(a);
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    /// `(a ⊗ v_S)(b ⊗ v_T) = (-1)^{|S||b|} ab ⊗ v_S v_T`.
    pub fn mul(&self, o: &ExteriorOverA) -> ExteriorOverA {
        let mut out = ExteriorOverA { rank: self.rank, alg: self.alg, terms: BTreeMap::new() };
        for (s, a) in &self.terms {
            for (t, b) in &o.terms {
                if s & t != 0 {
                    continue;
                }
                let b = if s.count_ones() % 2 == 1 { b.even_part().sub(&b.odd_part()) } else { b.clone() };
                let mut c = a.mul(&b);
                if merge_sign(*s, *t) {
                    c = c.neg();
                }
                out.add_term(s | t, &c);
            }
        }
        out
    }

    /// Grouplike test: even, `ε = 1`, `Δg = g ⊗_A g` with `(a⊗x) ⊗ (b⊗y) = (-1)^{|x||b|} ab (x⊗y)`.
    pub fn is_grouplike(&self) -> bool {
        let even = self.terms.iter().all(|(s, a)| {
            a.terms().all(|(m, _)| (m.count_ones() + s.count_ones()) % 2 == 0)
        });
        if !even || !self.terms.get(&0).is_some_and(|a| a.is_one()) {
            return false;
        }
        let mut delta: BTreeMap<(u64, u64), GrassmannElement> = BTreeMap::new();
        for (s, a) in &self.terms {
            let mut t = *s;
            loop {
                let rest = s & !t;
                let c = if merge_sign(t, rest) { a.neg() } else { a.clone() };
                let e = delta.entry((t, rest)).or_insert_with(|| self.alg.zero());
                *e = e.add(&c);
                if t == 0 {
                    break;
                }
                t = (t - 1) & s;
            }
        }
        let mut square: BTreeMap<(u64, u64), GrassmannElement> = BTreeMap::new();
        for (s, a) in &self.terms {
            for (t, b) in &self.terms {
                let b = if s.count_ones() % 2 == 1 { b.even_part().sub(&b.odd_part()) } else { b.clone() };
                let e = square.entry((*s, *t)).or_insert_with(|| self.alg.zero());
                *e = e.add(&a.mul(&b));
            }
        }
        delta.retain(|_, v| !v.is_zero());
        square.retain(|_, v| !v.is_zero());
        delta == square
    }

    /// `⟨g, w_T⟩_A = Σ_S a_S ⟨v_S, w_T⟩` for a basis element `w_T` of `∧(W)`.
    pub fn pair_with_basis(&self, t: u64, conv: PairingConvention) -> GrassmannElement {
        let f = self.alg.field();
        match self.terms.get(&t) {
            Some(a) => a.scale(&wedge_sign(f, t.count_ones() as usize, conv)),
            None => self.alg.zero(),
        }
    }
}

/// Checks that `g -> ⟨g, -⟩` sends each sample grouplike to a superalgebra map `∧(W) -> A` and
/// that products go to convolution products (suite `group-map`).
pub fn check_group_map(samples: &[ExteriorOverA], conv: PairingConvention) -> Report {
    const SUITE: &str = "group-map";
    let mut r = Report::new();
    let Some(first) = samples.first() else {
        return r;
    };
    let rank = first.rank;
    let n = 1u64 << rank;
    for (gi, g) in samples.iter().enumerate() {
        r.record(SUITE, "grouplike-sample", g.is_grouplike(), || format!("sample {gi}"));
        r.record(SUITE, "unital", g.pair_with_basis(0, conv).is_one(), || format!("sample {gi}"));
        for s in 0..n {
            for t in 0..n {
                let prod = if s & t == 0 {
                    let v = g.pair_with_basis(s | t, conv);
                    if merge_sign(s, t) {
                        v.neg()
                    } else {
                        v
                    }
                } else {
                    g.alg.zero()
                };
                let rhs = g.pair_with_basis(s, conv).mul(&g.pair_with_basis(t, conv));
                r.record(SUITE, "multiplicative", prod == rhs, || format!("sample {gi}, masks {s:b} {t:b}"));
            }
        }
        for (hi, h) in samples.iter().enumerate() {
            let gh = g.mul(h);
            for u in 0..n {
                let lhs = gh.pair_with_basis(u, conv);
                let mut rhs = g.alg.zero();
                let mut t = u;
                loop {
                    let rest = u & !t;
                    let term = g.pair_with_basis(t, conv).mul(&h.pair_with_basis(rest, conv));
                    rhs = if merge_sign(t, rest) { rhs.sub(&term) } else { rhs.add(&term) };
                    if t == 0 {
                        break;
                    }
                    t = (t - 1) & u;
                }
                r.record(SUITE, "convolution", lhs == rhs, || format!("samples {gi},{hi}, mask {u:b}"));
            }
        }
    }
    r
}

/// Re-labels a dual of `∧(W)` so that it reads as `∧(W*)` with basis `v1, v2, ...`.
pub fn exterior_dual_names(h: &HopfData, rank: usize) -> HopfData {
    h.clone().with_names(HopfData::exterior(h.field, rank, "v").names)
}

#[cfg(test)]
mod tests;
