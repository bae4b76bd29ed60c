//! Acceptance harness: runs the eight acceptance criteria and prints one PASS/FAIL line each.
//! Exits non-zero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use supergroup::fixture::{all_bundled, bundled, Fixture};
use supergroup::gamma::{Gamma, QUINTUPLE_SUITE};
use supergroup::grassmann::GrassmannAlgebra;
use supergroup::group::SUITE as ACTION_SUITE;
use supergroup::hcp::{SubPairData, SUB_SUITE, SUITE as PAIR_SUITE};
use supergroup::liesuper::SUITE as LIE_SUITE;
use supergroup::poly::Polynomial;
use supergroup::report::Report;
use supergroup::scalar::Scalar;
use supergroup::suites;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Outcome + 'a>);

struct Setup {
    fx: Fixture,
    gamma: Gamma,
    alg: GrassmannAlgebra,
}

fn setups() -> Vec<Setup> {
    all_bundled()
        .expect("bundled fixtures load")
        .into_iter()
        .map(|fx| {
            let gamma = Gamma::new(fx.pair.clone()).expect("fixture pair builds a supergroup");
            let alg = GrassmannAlgebra::new(4, fx.field()).expect("Grassmann algebra");
            Setup { fx, gamma, alg }
        })
        .collect()
}

/// Folds per-fixture reports into an outcome naming the fixtures and counting checks.
fn over_fixtures(fixtures: &[Setup], run: impl Fn(&Setup) -> supergroup::error::Result<Report>) -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for s in fixtures {
        match run(s) {
            Ok(r) => {
                checked += r.checked_count();
                if !r.is_ok() {
                    failures.push(format!("{}: {}", s.fx.name(), r.failing_conditions().join(", ")));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", s.fx.name())),
        }
    }
    if failures.is_empty() {
        Ok(format!("{checked} checks over {} fixtures", fixtures.len()))
    } else {
        Err(failures.join("; "))
    }
}

fn grouplike(fixtures: &[Setup]) -> Outcome {
    over_fixtures(fixtures, |s| suites::grouplike_suite(&s.gamma, s.alg))
}

fn relations(fixtures: &[Setup]) -> Outcome {
    over_fixtures(fixtures, |s| suites::relation_suite(&s.gamma, s.alg))
}

fn oracle(fixtures: &[Setup]) -> Outcome {
    over_fixtures(fixtures, |s| suites::oracle_suite(&s.fx, &s.gamma, s.alg, 4))
}

fn group_law(fixtures: &[Setup]) -> Outcome {
    over_fixtures(fixtures, |s| {
        let alg = GrassmannAlgebra::new(6, s.fx.field())?;
        Ok(suites::group_law_suite(&s.gamma, alg, 1000, 2024))
    })
}

fn duality() -> Outcome {
    let r = suites::duality_suite().map_err(|e| e.to_string())?;
    if r.is_ok() {
        Ok(format!("{} checks", r.checked_count()))
    } else {
        Err(r.failing_conditions().join(", "))
    }
}

fn roundtrip(fixtures: &[Setup]) -> Outcome {
    over_fixtures(fixtures, |s| Ok(s.gamma.roundtrip_check(&s.fx.pair, s.alg)))
}

fn theorem(fixtures: &[Setup]) -> Outcome {
    let with_subs: Vec<&Setup> = fixtures.iter().filter(|s| !s.fx.sub_pairs.is_empty()).collect();
    if with_subs.len() < 3 {
        return Err(format!("only {} fixtures carry sub-pairs", with_subs.len()));
    }
    let mut checked = 0;
    let mut subs = 0;
    for s in &with_subs {
        let r = suites::theorem_suite(&s.fx, &s.gamma, s.alg).map_err(|e| format!("{}: {e}", s.fx.name()))?;
        if !r.is_ok() {
            return Err(format!("{}: {}", s.fx.name(), r.failing_conditions().join(", ")));
        }
        for kind in ["normalizer", "centralizer"] {
            let outside = r.condition(suites::THEOREM_SUITE, &format!("{kind}-outside")).map_or(0, |c| c.checked);
            let inside = r.condition(suites::THEOREM_SUITE, &format!("{kind}-inside")).map_or(0, |c| c.checked);
            if inside + outside == 0 && s.fx.pair.odd_dim() > 0 {
                return Err(format!("{}: no {kind} witnesses ran", s.fx.name()));
            }
        }
        checked += r.checked_count();
        subs += s.fx.sub_pairs.len();
    }
    Ok(format!("{checked} witness checks over {subs} sub-pairs in {} fixtures", with_subs.len()))
}

/// One condition of the structural suites together with a single-constant mutation that
/// must make exactly that condition fail.
struct Mutation {
    suite: &'static str,
    condition: &'static str,
    report: Box<dyn Fn() -> Report>,
}

fn mutation(suite: &'static str, condition: &'static str, report: impl Fn() -> Report + 'static) -> Mutation {
    Mutation { suite, condition, report: Box::new(report) }
}

fn mutations() -> Vec<Mutation> {
    let fx = bundled("osp12").expect("osp12 fixture");
    let pair = fx.pair.clone();
    let lie = pair.lie_unchecked().clone();
    let field = fx.field();
    let q = move |n: i64| field.from_i64(n);
    let alg = GrassmannAlgebra::new(4, field).expect("Grassmann algebra");
    let e_vec = move |c: i64| vec![q(0), q(c), q(0), q(0), q(0)];
    let mut out = Vec::new();

    let lie_case = |condition: &'static str, edit: Box<dyn Fn(&mut supergroup::liesuper::LieSuperAlgebra)>| {
        let mut l = lie.clone();
        edit(&mut l);
        mutation(LIE_SUITE, condition, move || l.check_axioms())
    };
    out.push(lie_case("parity", Box::new(move |l| l.set_bracket(0, 3, vec![q(1), q(0), q(0), q(1), q(0)]))));
    out.push(lie_case("even-self-bracket", Box::new(move |l| l.set_bracket_raw(0, 0, e_vec(1)))));
    out.push(lie_case("odd-cube", Box::new(move |l| l.set_bracket(3, 4, vec![q(2), q(0), q(0), q(0), q(0)]))));
    out.push(lie_case("super-antisymmetry", Box::new(move |l| l.set_bracket_raw(0, 1, e_vec(3)))));
    out.push(lie_case("super-jacobi", Box::new(move |l| l.set_bracket(0, 1, e_vec(3)))));
    {
        let l = lie.clone();
        // a constant offset in one even coordinate of the candidate 2-operation
        out.push(mutation(LIE_SUITE, "square-homogeneity", move || {
            l.square_homogeneity(|v| {
                let mut w = l.two_op_of(v);
                w[0] = &w[0] + &q(1);
                w
            })
        }));
    }
    out.push(lie_case(
        "square-additivity",
        Box::new(move |l| {
            let c: Scalar = &l.two_op_basis(0)[1] + &q(1);
            l.set_two_op_constant(0, 1, c)
        }),
    ));
    out.push(lie_case(
        "square-adjoint",
        Box::new(move |l| {
            let c: Scalar = &l.two_op_basis(0)[0] + &q(1);
            l.set_two_op_constant(0, 0, c)
        }),
    ));

    let p = pair.clone();
    out.push(mutation(PAIR_SUITE, "bracket-symmetry", move || {
        p.with_bracket_constant(0, 1, 1, q(1), false).expect("mutated pair").check_pair(&[])
    }));
    let p = pair.clone();
    out.push(mutation(PAIR_SUITE, "odd-self-action", move || {
        let c = &p.bracket_table()[0][0][1] + &q(1);
        let bad = p.with_bracket_constant(0, 0, 1, c, true).expect("mutated pair");
        bad.check_pair(&bad.group_samples(alg))
    }));

    let p = pair.clone();
    out.push(mutation(ACTION_SUITE, "bracket-derivative", move || {
        let a = p.action();
        let flipped = a.with_entry(3, 3, a.rows()[3][3].neg());
        flipped.check_conditions(&p.group_samples(alg), &p.test_functions())
    }));
    let p = pair.clone();
    out.push(mutation(ACTION_SUITE, "leibniz", move || {
        let g = p.group().clone();
        let first = g.coordinate(0, 0);
        // the tangent pairing shifted by one on the first coordinate function only
        g.leibniz_report(&p.test_functions(), |x, c| {
            let v = g.tangent_pairing(x, c)?;
            Ok(if *c == first { &v + &q(1) } else { v })
        })
    }));
    let p = pair.clone();
    out.push(mutation(ACTION_SUITE, "adjoint-compatibility", move || {
        let a = p.action();
        // doubles one off-diagonal coefficient of the adjoint matrix
        let bad = a.with_entry(1, 0, a.rows()[1][0].scale(&q(2)));
        bad.check_conditions(&p.group_samples(alg), &p.test_functions())
    }));

    let borel = fx.sub_pair("borel").expect("borel sub-pair").clone();
    let p = pair.clone();
    out.push(mutation(SUB_SUITE, "odd-stability", move || {
        let moved = rebuilt_sub(&p, &borel, vec![vec![q(1), q(1)]]);
        moved.check(&p)
    }));
    let torus = fx.sub_pair("torus").expect("torus sub-pair").clone();
    let p = pair.clone();
    out.push(mutation(SUB_SUITE, "bracket-closure", move || {
        let open = rebuilt_sub(&p, &torus, vec![vec![q(1), q(0)]]);
        open.check(&p)
    }));

    let p = pair.clone();
    let l = lie.clone();
    out.push(mutation(QUINTUPLE_SUITE, "subgroup", move || {
        let mut bad = l.clone();
        bad.set_bracket(0, 1, e_vec(3));
        Gamma::with_overrides(p.clone(), Some(bad), None).check_quintuple(alg)
    }));
    let p = pair.clone();
    out.push(mutation(QUINTUPLE_SUITE, "inner-compatibility", move || {
        let d = p.group().det_inv_function();
        let odd = p.action().with_entry(3, 4, d.mul(&p.group().coordinate(1, 1)).scale(&q(2)));
        Gamma::with_overrides(p.clone(), None, Some(odd)).check_quintuple(alg)
    }));
    let p = pair;
    out.push(mutation(QUINTUPLE_SUITE, "equivariance", move || {
        let even = p.action().with_entry(1, 1, Polynomial::one(field, p.group().nvars()));
        Gamma::with_overrides(p.clone(), None, Some(even)).check_quintuple(alg)
    }));
    out
}

fn rebuilt_sub(pair: &supergroup::hcp::HCPair, sub: &SubPairData, odd: Vec<Vec<Scalar>>) -> SubPairData {
    let points = sub.points().to_vec();
    SubPairData::new(pair, format!("{}-mutated", sub.name()), sub.extra_equations().to_vec(), sub.parametrization().cloned(), points, odd)
        .expect("mutated sub-pair builds")
}

fn conditions(fixtures: &[Setup]) -> Outcome {
    let clean = over_fixtures(fixtures, |s| Ok(suites::condition_suite(&s.fx, &s.gamma, s.alg)))?;
    let cases = mutations();
    let mut missed = Vec::new();
    for m in &cases {
        let r = (m.report)();
        match r.condition(m.suite, m.condition) {
            Some(c) if !c.failures.is_empty() => {}
            Some(_) => missed.push(format!("{}/{} mutation not caught", m.suite, m.condition)),
            None => missed.push(format!("{}/{} never evaluated", m.suite, m.condition)),
        }
    }
    if missed.is_empty() {
        Ok(format!("{clean}; {} single-constant mutations caught", cases.len()))
    } else {
        Err(missed.join("; "))
    }
}

fn main() -> ExitCode {
    let fixtures = setups();
    let criteria: Vec<Criterion> = vec![
        ("grouplike elements and inverses", Duration::from_secs(5), Box::new(|| grouplike(&fixtures))),
        ("commutation relations", Duration::from_secs(30), Box::new(|| relations(&fixtures))),
        ("normal-form oracle, words up to length 4", Duration::from_secs(120), Box::new(|| oracle(&fixtures))),
        ("group law on 1000 seeded triples", Duration::from_secs(60), Box::new(|| group_law(&fixtures))),
        ("exterior duality", Duration::from_secs(10), Box::new(duality)),
        ("pair/supergroup roundtrip", Duration::from_secs(120), Box::new(|| roundtrip(&fixtures))),
        ("normalizers and centralizers by witnesses", Duration::from_secs(120), Box::new(|| theorem(&fixtures))),
        ("condition suites with mutations", Duration::from_secs(60), Box::new(|| conditions(&fixtures))),
    ];
    let mut all_ok = true;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let within = elapsed <= *limit;
        let ok = outcome.is_ok() && within;
        all_ok &= ok;
        let detail = match &outcome {
            Ok(d) => d.clone(),
            Err(d) => d.clone(),
        };
        let timing = if within { String::new() } else { format!(", over the {} s budget", limit.as_secs()) };
        println!(
            "criterion {} {}: {} ({detail}; {:.2} s{timing})",
            k + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
