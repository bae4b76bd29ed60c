//! Fixture-level verification suites shared by the command line, the FFI layer and the
//! acceptance harness. Each returns a [`Report`].

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::duality::{
    check_dual_comparison, check_hopf_pairing, check_sigma_comparison, exterior_pairing_table, ext_pairing,
    is_nondegenerate, nu_isomorphism, HopfData, PairingConvention,
};
use crate::env::{e_factor, f_factor, verify_relation, Relation, UEnvElement};
use crate::error::Result;
use crate::fixture::Fixture;
use crate::gamma::{Gamma, GammaElement, Letter, PairModelElement};
use crate::grassmann::{GrassmannAlgebra, GrassmannElement};
use crate::group::GroupPoint;
use crate::hcp::{center_pair, centralizer_pair, normalizer_pair, SubPairData, SubPairKind, SubPairResult};
use crate::linalg::{self, Matrix};
use crate::report::Report;
use crate::scalar::Field;

pub const GROUPLIKE_SUITE: &str = "grouplike";
pub const RELATION_SUITE: &str = "relations";
pub const ORACLE_SUITE: &str = "oracle";
pub const THEOREM_SUITE: &str = "sub-pair-theorem";
pub const DUALITY_SUITE: &str = "exterior-duality";

/// Even square-zero parameters `τ_i τ_j` for `i < j`.
fn even_parameters(alg: GrassmannAlgebra) -> Vec<(String, GrassmannElement)> {
    let n = alg.generators();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((format!("t{}t{}", i + 1, j + 1), alg.generator(i).mul(&alg.generator(j))));
        }
    }
    out
}

fn odd_parameters(alg: GrassmannAlgebra) -> Vec<(String, GrassmannElement)> {
    (0..alg.generators()).map(|i| (format!("t{}", i + 1), alg.generator(i))).collect()
}

/// `e(a, v)` and `f(ε, x)` are grouplike with inverses `e(-a, v)` and `f(-ε, x)`, for every
/// generator choice and basis vector.
pub fn grouplike_suite(gamma: &Gamma, alg: GrassmannAlgebra) -> Result<Report> {
    let mut r = Report::new();
    let env = gamma.env();
    let lie = gamma.lie();
    let m = lie.even_dim();
    let one = UEnvElement::one(env, alg);
    let mut check = |label: String, u: UEnvElement, inv: UEnvElement| {
        r.record(GROUPLIKE_SUITE, "grouplike", u.is_grouplike(), || label.clone());
        r.record(GROUPLIKE_SUITE, "inverse", u.mul(&inv) == one && inv.mul(&u) == one, || label.clone());
    };
    for (an, a) in odd_parameters(alg) {
        for j in 0..lie.odd_dim() {
            let v = lie.basis_vector(m + j);
            check(format!("e({an}, {})", lie.name(m + j)), e_factor(env, &a, &v)?, e_factor(env, &a.neg(), &v)?);
        }
    }
    for (en, eps) in even_parameters(alg) {
        for i in 0..m {
            let x = lie.basis_vector(i);
            check(format!("f({en}, {})", lie.name(i)), f_factor(env, &eps, &x)?, f_factor(env, &eps.neg(), &x)?);
        }
    }
    Ok(r)
}

/// The four commutation relations between `e`- and `f`-factors, over all basis pairs and all
/// generator choices.
pub fn relation_suite(gamma: &Gamma, alg: GrassmannAlgebra) -> Result<Report> {
    let mut r = Report::new();
    let env = gamma.env();
    let lie = gamma.lie();
    let m = lie.even_dim();
    let n = lie.odd_dim();
    let odd: Vec<_> = (0..n).map(|j| (lie.name(m + j).to_string(), lie.basis_vector(m + j))).collect();
    let even: Vec<_> = (0..m).map(|i| (lie.name(i).to_string(), lie.basis_vector(i))).collect();
    let odd_params = odd_parameters(alg);
    let even_params = even_parameters(alg);
    let mut run = |rel: Relation, label: String| -> Result<()> {
        let (lhs, rhs) = verify_relation(env, &rel)?;
        r.record(RELATION_SUITE, rel.label(), lhs == rhs, || label);
        Ok(())
    };
    for (an, a) in &odd_params {
        for (bn, b) in &odd_params {
            for (un, u) in &odd {
                for (vn, v) in &odd {
                    let rel = Relation::OddOdd { a: a.clone(), b: b.clone(), u: u.clone(), v: v.clone() };
                    run(rel, format!("e({an},{un}) e({bn},{vn})"))?;
                }
                let rel = Relation::Repeated { a: a.clone(), b: b.clone(), v: u.clone() };
                run(rel, format!("e({an},{un}) e({bn},{un})"))?;
            }
        }
        for (en, eps) in &even_params {
            for (vn, v) in &odd {
                for (xn, x) in &even {
                    let rel = Relation::OddEven { a: a.clone(), v: v.clone(), eps: eps.clone(), x: x.clone() };
                    run(rel, format!("e({an},{vn}) f({en},{xn})"))?;
                }
            }
        }
    }
    for (en, eps) in &even_params {
        for (hn, eta) in &even_params {
            for (xn, x) in &even {
                for (yn, y) in &even {
                    let rel = Relation::EvenEven { eps: eps.clone(), x: x.clone(), eta: eta.clone(), y: y.clone() };
                    run(rel, format!("f({en},{xn}) f({hn},{yn})"))?;
                }
            }
        }
    }
    Ok(r)
}

/// Letters of the exhaustive oracle: the fixture's group generators and `e(τ_i, v_j)`.
pub fn oracle_letters(fx: &Fixture, gamma: &Gamma, alg: GrassmannAlgebra) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    for m in &fx.generators {
        out.push(Letter::Point(gamma.group().point_from_scalars(alg, m)?));
    }
    for i in 0..alg.generators() {
        for j in 0..gamma.odd_dim() {
            out.push(Letter::odd_basis(alg.generator(i), gamma.odd_dim(), j));
        }
    }
    Ok(out)
}

struct OracleState {
    nf: GammaElement,
    pm: PairModelElement,
}

fn oracle_walk(
    gamma: &Gamma,
    letters: &[Letter],
    pm_letters: &[PairModelElement],
    state: &OracleState,
    word: &mut Vec<usize>,
    max_len: usize,
    r: &mut Report,
) -> Result<()> {
    for (k, letter) in letters.iter().enumerate() {
        word.push(k);
        let nf = gamma.append(&state.nf, letter)?;
        let pm = gamma.pm_mul(&state.pm, &pm_letters[k])?;
        // the grouplike test is the expensive part; run it on short words only
        let normal = if word.len() <= 2 { gamma.pm_normalize(&pm) } else { gamma.pm_normalize_unchecked(&pm) };
        let agree = normal.as_ref().is_ok_and(|x| *x == nf);
        r.record(ORACLE_SUITE, "rewriting-matches-pair-model", agree, || {
            let w: Vec<String> = word.iter().map(|&i| letters[i].to_string()).collect();
            format!("word [{}]: rewriting {nf}, pair model {:?}", w.join(", "), normal.as_ref().map(|x| x.to_string()))
        });
        if word.len() < max_len {
            oracle_walk(gamma, letters, pm_letters, &OracleState { nf, pm }, word, max_len, r)?;
        }
        word.pop();
    }
    Ok(())
}

/// Every word of length `1..=max_len` over the oracle letters has the same normal form by
/// rewriting and by the pair-model computation. Work is split across threads by first letter.
pub fn oracle_suite(fx: &Fixture, gamma: &Gamma, alg: GrassmannAlgebra, max_len: usize) -> Result<Report> {
    let letters = oracle_letters(fx, gamma, alg)?;
    let pm_letters = letters.iter().map(|l| gamma.pm_letter(alg, l)).collect::<Result<Vec<_>>>()?;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(letters.len().max(1));
    let chunks: Vec<Vec<usize>> = (0..threads).map(|t| (t..letters.len()).step_by(threads).collect()).collect();
    let results: Vec<Result<Report>> = std::thread::scope(|s| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|firsts| {
                let (letters, pm_letters) = (&letters, &pm_letters);
                s.spawn(move || -> Result<Report> {
                    let mut r = Report::new();
                    for &k in firsts {
                        let mut word = vec![k];
                        let nf = gamma.from_word(alg, std::slice::from_ref(&letters[k]))?;
                        let pm = pm_letters[k].clone();
                        let normal = gamma.pm_normalize(&pm);
                        r.record(ORACLE_SUITE, "rewriting-matches-pair-model", normal.as_ref().is_ok_and(|x| *x == nf), || {
                            format!("letter {}", letters[k])
                        });
                        if max_len > 1 {
                            oracle_walk(gamma, letters, pm_letters, &OracleState { nf, pm }, &mut word, max_len, &mut r)?;
                        }
                    }
                    Ok(r)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("oracle worker panicked")).collect()
    });
    let mut total = Report::new();
    total.touch(ORACLE_SUITE, "rewriting-matches-pair-model");
    for r in results {
        total.merge(r?);
    }
    Ok(total)
}

/// Group axioms on seeded random triples.
pub fn group_law_suite(gamma: &Gamma, alg: GrassmannAlgebra, triples: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gamma.check_group_law(alg, triples, &mut rng)
}

/// Witness certification of one normalizer or centralizer: each basis vector of the computed
/// odd part passes, and each vector outside it (complement basis vectors, also shifted by
/// basis vectors) fails.
pub fn witness_report(
    gamma: &Gamma,
    sub: &SubPairData,
    kind: SubPairKind,
    result: &SubPairResult,
    alg: GrassmannAlgebra,
) -> Result<Report> {
    let mut r = Report::new();
    let f = gamma.field();
    let n = gamma.odd_dim();
    let cond = match kind {
        SubPairKind::Normalizer => "normalizer",
        SubPairKind::Centralizer => "centralizer",
    };
    r.touch(THEOREM_SUITE, &format!("{cond}-inside"));
    r.touch(THEOREM_SUITE, &format!("{cond}-outside"));
    for z in &result.odd_basis {
        let failures = gamma.witness(sub, kind, z, alg)?;
        r.record(THEOREM_SUITE, &format!("{cond}-inside"), failures.is_empty(), || {
            format!("{}: {} fails: {}", sub.name(), gamma.lie().format_vector(&odd_full(gamma, z)), failures.join("; "))
        });
    }
    let outside = linalg::complement_basis(f, &result.odd_basis, n);
    for c in &outside {
        let mut probes = vec![c.clone()];
        probes.extend(result.odd_basis.iter().map(|b| linalg::add_vectors(b, c)));
        for z in probes {
            let failures = gamma.witness(sub, kind, &z, alg)?;
            r.record(THEOREM_SUITE, &format!("{cond}-outside"), !failures.is_empty(), || {
                format!("{}: {} passes but lies outside", sub.name(), gamma.lie().format_vector(&odd_full(gamma, &z)))
            });
        }
    }
    Ok(r)
}

fn odd_full(gamma: &Gamma, z: &[crate::scalar::Scalar]) -> linalg::Vector {
    let mut v = linalg::zero_vector(gamma.field(), gamma.even_dim());
    v.extend_from_slice(z);
    v
}

/// Normalizers and centralizers of every sub-pair of the fixture, certified by witnesses.
pub fn theorem_suite(fx: &Fixture, gamma: &Gamma, alg: GrassmannAlgebra) -> Result<Report> {
    let mut r = Report::new();
    for sub in &fx.sub_pairs {
        for kind in [SubPairKind::Normalizer, SubPairKind::Centralizer] {
            let result = match kind {
                SubPairKind::Normalizer => normalizer_pair(&fx.pair, sub)?,
                SubPairKind::Centralizer => centralizer_pair(&fx.pair, sub)?,
            };
            r.merge(witness_report(gamma, sub, kind, &result, alg)?);
        }
    }
    Ok(r)
}

/// All structural condition suites on a fixture: superalgebra axioms, pair conditions, action
/// conditions, sub-pair conditions, and the quintuple conditions.
pub fn condition_suite(fx: &Fixture, gamma: &Gamma, alg: GrassmannAlgebra) -> Report {
    let mut r = fx.pair.check_all(alg);
    for sub in &fx.sub_pairs {
        r.merge(sub.check(&fx.pair));
    }
    r.merge(gamma.check_quintuple(alg));
    r
}

/// Exterior duality: the deformed sign, Gram nondegeneracy, Hopf-pairing axioms, the
/// σ-comparison identity, and the ν-isomorphism over `F_5`.
pub fn duality_suite() -> Result<Report> {
    let q = Field::Rationals;
    let mut r = Report::new();
    let ext = GrassmannAlgebra::new(2, q)?;
    let top = ext.generator(0).mul(&ext.generator(1));
    let v = ext_pairing(&top, &top, PairingConvention::Deformed)?;
    r.record(DUALITY_SUITE, "deformed-sign", v == q.from_i64(-1), || format!("pairing of top wedges is {v}"));
    for rank in 0..=4 {
        for conv in [PairingConvention::Deformed, PairingConvention::Ordinary] {
            let t = exterior_pairing_table(q, rank, conv);
            r.record(DUALITY_SUITE, "gram-nondegenerate", is_nondegenerate(&t), || format!("rank {rank}, {conv}"));
        }
    }
    for rank in 1..=3 {
        let l = HopfData::exterior(q, rank, "v");
        let h = HopfData::exterior(q, rank, "w");
        let t = exterior_pairing_table(q, rank, PairingConvention::Deformed);
        r.merge(check_hopf_pairing(&l, &h, &t, PairingConvention::Deformed));
        r.merge(check_sigma_comparison(&t, &t));
        r.merge(check_dual_comparison(&h));
    }
    let f5 = Field::prime(5)?;
    r.merge(nu_isomorphism(&HopfData::exterior(f5, 2, "w"))?);
    r.merge(nu_isomorphism(&HopfData::group_algebra_z2(f5))?);
    Ok(r)
}

/// Gram matrices of the exterior pairing in both conventions, keyed by convention name.
pub fn pairing_tables(field: Field, rank: usize) -> BTreeMap<String, Matrix> {
    [PairingConvention::Deformed, PairingConvention::Ordinary]
        .into_iter()
        .map(|c| (c.to_string(), exterior_pairing_table(field, rank, c).values))
        .collect()
}

/// The center of a fixture pair with witness certification (needs a parametrization).
pub fn center_report(fx: &Fixture, gamma: &Gamma, alg: GrassmannAlgebra) -> Result<(SubPairResult, Report)> {
    let result = center_pair(&fx.pair)?;
    let whole = SubPairData::whole(&fx.pair)?;
    let report = witness_report(gamma, &whole, SubPairKind::Centralizer, &result, alg)?;
    Ok((result, report))
}

/// Converts scalar matrices from a fixture into group points over `alg`.
pub fn fixture_points(fx: &Fixture, alg: GrassmannAlgebra) -> Result<Vec<GroupPoint>> {
    fx.generators.iter().map(|m| fx.pair.group().point_from_scalars(alg, m)).collect()
}

#[cfg(test)]
mod tests;
