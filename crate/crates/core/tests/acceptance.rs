//! Acceptance suite: one line per criterion with its timing budget.
//!
//! Criteria listed in `KNOWN_RED` fail for reasons analysed in the decision
//! notes; they still run in full and print FAIL. The process exits non-zero
//! when any other criterion fails, or when a known-red one starts passing.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use tgraded::coalgebra::{coalg_split_from_rb, dualize, grouplike, grouplike_antipode};
use tgraded::constructions::{
    self as cons, atkinson_converse_check, atkinson_factorize, group_algebra_bundle, idempotent_consequences,
    left_linear_equivalence, lift_group_algebra, quasi_idempotency_test, Mode,
};
use tgraded::corpus::{self, AlgebraId};
use tgraded::grading::{GradeTable, GradedSpace};
use tgraded::laws::{check, Law, Variant};
use tgraded::paper::{self, Options};
use tgraded::scalar::{Assignment, Field, FieldElement, Specializer, WEIGHT};
use tgraded::search::{classical_bundle, enumerate_rb_operators, DEFAULT_BUDGET};
use tgraded::structures::{basis, Algebra, BilinearFamily, Bundle, Matrix, OperatorFamily};
use tgraded::Error;

const SEED: u64 = 1;
const KNOWN_RED: &[u32] = &[1, 2, 3, 10];

type Verdict = Result<String, String>;

fn opts() -> Options {
    Options { seed: SEED, specializations: 5 }
}

fn fail_if(bad: Vec<String>, summary: String) -> Verdict {
    if bad.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; failing: {}", bad.join(", ")))
    }
}

fn err(e: Error) -> String {
    format!("error: {e}")
}

fn over(f: &Field, a: Algebra<i64>) -> Algebra<FieldElement> {
    a.try_map(|&x| Ok(f.from_int(x))).unwrap()
}

/// Every Rota-Baxter operator found by search, as classical bundles and
/// lifted to `A[{1,q}]`, for the small prime fields and weights 0 and 1.
fn enumerated_instances() -> Vec<(String, Bundle)> {
    let mut out = Vec::new();
    for (alg, p) in [(AlgebraId::TwoDim, 2), (AlgebraId::TwoDim, 3), (AlgebraId::ThreeDim, 2), (AlgebraId::ThreeDim, 3), (AlgebraId::Taft, 2)] {
        let f = Field::prime(p).unwrap();
        let a = alg.over(&f);
        for w in [0, 1] {
            let w = f.from_int(w);
            let ops = enumerate_rb_operators(&a, &w, DEFAULT_BUDGET).unwrap();
            for (i, m) in ops.iter().enumerate() {
                let tag = format!("{} F{p} λ={w} #{i}", alg.name());
                out.push((tag.clone(), classical_bundle(&a, m, &w)));
                out.push((format!("{tag} lifted"), group_algebra_bundle(&a, std::slice::from_ref(m), &w, &GradeTable::unit_idempotent()).unwrap()));
            }
        }
    }
    out
}

fn c1_operators() -> Verdict {
    let entries = corpus::operators();
    let mut bad = Vec::new();
    for e in &entries {
        if !paper::verify_operator(e, opts()).map_err(err)?.passed {
            bad.push(e.id.clone());
        }
    }
    fail_if(bad, format!("{} listed operators", entries.len()))
}

fn c2_pairs() -> Verdict {
    let entries = corpus::pairs();
    let mut bad = Vec::new();
    for e in &entries {
        if !paper::verify_pair(e, opts()).map_err(err)?.passed {
            bad.push(e.id.clone());
        }
    }
    fail_if(bad, format!("{} listed pairs", entries.len()))
}

fn c3_lifts() -> Verdict {
    let f = Field::Rational;
    let grades = [GradeTable::trivial(), GradeTable::unit_idempotent(), GradeTable::cyclic(2)];
    let mut bad = Vec::new();
    let mut lifted = 0;
    for e in corpus::operators() {
        let alg = e.algebra.over(&f);
        let assignments: Vec<Assignment> = if e.is_parametric() {
            let params: Vec<String> = std::iter::once(WEIGHT.to_string()).chain(e.family.params.iter().cloned()).collect();
            let mut s = Specializer::new(SEED);
            (0..3).map(|_| s.next(&params, &f, &e.family.all_forbidden())).collect::<Result<_, _>>().map_err(err)?
        } else {
            paper::weights(SEED).map_err(err)?.into_iter().map(|w| Assignment::from([(WEIGHT.to_string(), w)])).collect()
        };
        let mut ok = true;
        'outer: for a in &assignments {
            let m = e.family.at(&f, a).map_err(err)?;
            for g in &grades {
                match lift_group_algebra(&alg, &m, &a[WEIGHT], g) {
                    Ok(_) => lifted += 1,
                    Err(Error::Hypothesis(_)) | Err(Error::Postcondition(_)) => {
                        ok = false;
                        break 'outer;
                    }
                    Err(e) => return Err(err(e)),
                }
            }
        }
        if !ok {
            bad.push(e.id.clone());
        }
    }
    let pairs: Vec<_> = corpus::pairs()
        .into_iter()
        .filter(|p| p.id.starts_with("15.5") || p.id.starts_with("15.7"))
        .chain(corpus::lifts())
        .collect();
    for p in &pairs {
        if !paper::verify_lift(p, opts()).map_err(err)?.passed {
            bad.push(p.id.clone());
        }
    }
    fail_if(bad, format!("{lifted} operator lifts, {} pair lifts", pairs.len()))
}

fn c4_constructions(instances: &[(String, Bundle)]) -> Verdict {
    let mut bad = Vec::new();
    let mut routes = 0;
    for (tag, b) in instances {
        let mut run = || -> tgraded::Result<bool> {
            let dend = cons::rb_to_dendriform(b, Mode::Fast)?;
            let tri = cons::rb_to_tridendriform(b, Mode::Fast)?;
            let mut ok = check(Law::Dendriform, &dend)?.passed()
                && check(Law::Tridendriform, &tri)?.passed()
                && check(Law::Dendriform, &cons::tridend_to_dend(&tri, Mode::Fast)?)?.passed()
                && check(Law::TAlgebra { unital: false, commutative: false }, &cons::dend_sum_product(&dend, Mode::Fast)?)?.passed()
                && check(Law::TAlgebra { unital: false, commutative: false }, &cons::tridend_sum_product(&tri, Mode::Fast)?)?.passed()
                && check(Law::RotaBaxter, &cons::tilde_bundle(b, Mode::Fast)?)?.passed();
            if b.grades.is_commutative() {
                let prelie = cons::dend_to_prelie(&dend, Mode::Fast)?;
                ok &= check(Law::PreLie, &prelie)?.passed() && check(Law::Lie, &cons::prelie_to_lie(&prelie, Mode::Fast)?)?.passed();
            }
            let co = cons::coherence(b)?;
            routes += co.len();
            Ok(ok && co.iter().all(|(_, holds)| *holds) && co.len() == if b.grades.is_commutative() { 4 } else { 2 })
        };
        if !run().map_err(err)? {
            bad.push(tag.clone());
        }
    }
    fail_if(bad, format!("{} instances, {routes} coherence routes", instances.len()))
}

fn c5_search() -> Verdict {
    let mut bad = Vec::new();
    let mut summary = Vec::new();
    for (alg, p) in [(AlgebraId::TwoDim, 2), (AlgebraId::TwoDim, 3), (AlgebraId::TwoDim, 5), (AlgebraId::ThreeDim, 2), (AlgebraId::ThreeDim, 3), (AlgebraId::Taft, 2)] {
        let f = Field::prime(p).unwrap();
        for w in [0, 1] {
            let r = paper::search_report(alg, &f.from_int(w), false, DEFAULT_BUDGET).map_err(err)?;
            let tag = format!("{} F{p} λ={w}", alg.name());
            if !r.tilde_closed {
                bad.push(format!("{tag} not tilde-closed"));
            }
            for (m, _) in &r.families {
                if !m.complete() {
                    bad.push(format!("{tag} {} missing {}", m.id, m.missing.len()));
                }
            }
            summary.push(format!("{tag}: {}", r.operators.len()));
        }
    }
    fail_if(bad, format!("operators found {}", summary.join(", ")))
}

fn c6_atkinson(instances: &[(String, Bundle)]) -> Verdict {
    let mut bad = Vec::new();
    let mut pairs = 0;
    for (tag, b) in instances.iter().filter(|(_, b)| !b.operator("R").unwrap().weight.is_zero()) {
        let dims = &b.space.dims;
        let mut witnesses = std::collections::BTreeMap::new();
        for p in 0..dims.len() {
            for q in 0..dims.len() {
                for i in 0..dims[p] {
                    for j in 0..dims[q] {
                        let w = atkinson_factorize(b, p, &basis(&b.field, dims[p], i), q, &basis(&b.field, dims[q], j)).map_err(err)?;
                        witnesses.insert((p, i, q, j), w.c);
                        pairs += 1;
                    }
                }
            }
        }
        let r = atkinson_converse_check(b, |p, i, q, j| witnesses[&(p, i, q, j)].clone()).map_err(err)?;
        if !r.passed() {
            bad.push(tag.clone());
        }
    }
    fail_if(bad, format!("{pairs} basis-pair factorizations"))
}

fn c7_left_linear() -> Verdict {
    let f = Field::prime(2).unwrap();
    let alg = over(&f, corpus::two_dim());
    let mut families = 0;
    let mut linear = 0;
    let mut bad = Vec::new();
    for g in [GradeTable::trivial(), GradeTable::unit_idempotent(), GradeTable::cyclic(2)] {
        for w in [0, 1] {
            let w = f.from_int(w);
            for bits in 0u32..1 << (4 * g.len()) {
                let m = |shift: usize| Matrix { n: 2, data: (0..4).map(|k| f.from_int(((bits >> (4 * shift + k)) & 1) as i64)).collect() };
                let ms: Vec<_> = (0..g.len()).map(m).collect();
                let b = group_algebra_bundle(&alg, &ms, &w, &g).map_err(err)?;
                families += 1;
                match left_linear_equivalence(&b) {
                    Ok(r) => {
                        linear += 1;
                        if !r.passed() {
                            bad.push(format!("{} λ={w} #{bits}", g.names().join("")));
                        }
                    }
                    Err(Error::Hypothesis(_)) => {}
                    Err(e) => return Err(err(e)),
                }
            }
        }
    }
    fail_if(bad, format!("{families} operator families over F2, {linear} left-linear"))
}

fn c8_idempotent(instances: &[(String, Bundle)]) -> Verdict {
    let mut bad = Vec::new();
    let mut n = 0;
    for (tag, b) in instances {
        if quasi_idempotency_test(b.operator("R").unwrap(), &b.field).idempotent {
            n += 1;
            if !idempotent_consequences(b).map_err(err)?.passed() {
                bad.push(tag.clone());
            }
        }
    }
    if n == 0 {
        return Err("no idempotent instance".into());
    }
    fail_if(bad, format!("{n} idempotent instances"))
}

fn c9_duality(instances: &[(String, Bundle)]) -> Verdict {
    let mut bad = Vec::new();
    for (tag, b) in instances {
        let run = || -> tgraded::Result<bool> {
            let unital = b.unit.is_some() && b.grades.unit().is_some();
            let d = dualize(b)?;
            let dend = cons::rb_to_dendriform(b, Mode::Fast)?;
            let tri = cons::rb_to_tridendriform(b, Mode::Fast)?;
            let sum = cons::dend_sum_product(&dend, Mode::Fast)?;
            let same = |x: bool, y: bool| x == y;
            let mut ok = same(
                check(Law::TAlgebra { unital, commutative: false }, b)?.passed(),
                check(Law::TCoalgebra { counital: unital }, &d)?.passed(),
            );
            ok &= same(check(Law::RotaBaxter, b)?.passed(), check(Law::RbTCoalgebra, &d)?.passed());
            ok &= same(check(Law::Dendriform, &dend)?.passed(), check(Law::SplitCoalgebra(Variant::Dendriform), &dualize(&dend)?)?.passed());
            ok &= same(
                check(Law::Tridendriform, &tri)?.passed(),
                check(Law::SplitCoalgebra(Variant::Tridendriform), &dualize(&tri)?)?.passed(),
            );
            ok &= same(
                check(Law::TAlgebra { unital: false, commutative: false }, &sum)?.passed(),
                check(Law::TCoalgebra { counital: false }, &dualize(&sum)?)?.passed(),
            );
            ok &= check(Law::RbTCoalgebra, &d)?.passed();
            ok &= coalg_split_from_rb(&d, Variant::Dendriform, Mode::Fast)?.coalgebra.coproducts == dualize(&dend)?.coalgebra.coproducts;
            Ok(ok)
        };
        if !run().map_err(err)? {
            bad.push(tag.clone());
        }
    }
    fail_if(bad, format!("{} instances, 6 paired laws each", instances.len()))
}

/// `K[Z/2]` over a one-dimensional algebra: grouplike, `S = id`, `R = −λ·id`.
fn trivial_hopf(w: &FieldElement) -> tgraded::Result<Bundle> {
    let f = w.field();
    let alg = Algebra { name: "K".into(), dim: 1, table: vec![f.one()], unit: Some(vec![f.one()]) };
    let r = Matrix::scalar(&f, 1, &-w);
    let b = grouplike(&group_algebra_bundle(&alg, &[r], w, &GradeTable::cyclic(2))?);
    let mut h = b.clone();
    h.coalgebra.antipode = Some(grouplike_antipode(&b, |_, _| basis(&f, 1, 0))?);
    Ok(h)
}

fn c10_semi_hopf() -> Verdict {
    let mut bad = Vec::new();
    let entries = corpus::semi_hopf();
    for e in &entries {
        if !paper::verify_semi_hopf(e, opts()).map_err(err)?.passed {
            bad.push(e.id.clone());
        }
    }
    let f = Field::Rational;
    for w in ["1", "3/2"] {
        let h = trivial_hopf(&f.parse_element(w).unwrap()).map_err(err)?;
        if !(check(Law::Hopf, &h).map_err(err)?.passed() && check(Law::RotaBaxter, &h).map_err(err)?.passed()) {
            bad.push(format!("K[Z/2] λ={w}"));
        }
    }
    fail_if(bad, format!("{} listings, K[Z/2] Hopf at two weights", entries.len()))
}

/// `span{1, x, y, xy}` with `x² = y² = 0` and `{x, y} = xy`, over `A[Z/2]`.
fn poisson_bundle(f: &Field, r: &Matrix<FieldElement>) -> Bundle {
    // monomials x^a y^b indexed by a + 2b
    let mono = |i: usize| (i & 1, i >> 1);
    let idx = |a: usize, b: usize| a + 2 * b;
    let g = GradeTable::cyclic(2);
    let sp = GradedSpace::uniform(&g, 4);
    let mul = BilinearFamily::from_fn(&g, &sp, |_, _, i, j, k| {
        let ((a1, b1), (a2, b2)) = (mono(i), mono(j));
        f.from_int((a1 + a2 <= 1 && b1 + b2 <= 1 && idx(a1 + a2, b1 + b2) == k) as i64)
    });
    // {x^a1 y^b1, x^a2 y^b2} = (a1 b2 − b1 a2) x^(a1+a2) y^(b1+b2)
    let bracket = BilinearFamily::from_fn(&g, &sp, |_, _, i, j, k| {
        let ((a1, b1), (a2, b2)) = (mono(i), mono(j));
        let c = (a1 * b2) as i64 - (b1 * a2) as i64;
        if c != 0 && a1 + a2 <= 1 && b1 + b2 <= 1 && idx(a1 + a2, b1 + b2) == k {
            f.from_int(c)
        } else {
            f.zero()
        }
    });
    let op = OperatorFamily::from_fn(&sp, f.zero(), |_, i, j| r.image(i)[j].clone());
    let mut b = Bundle::new("rota-baxter-poisson-t-algebra", f.clone(), g, sp)
        .with_family("mul", mul)
        .with_family("bracket", bracket)
        .with_operator("R", op);
    b.unit = Some(basis(f, 4, 0));
    b
}

fn c11_poisson() -> Verdict {
    let f = Field::prime(3).unwrap();
    let upper: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
    let mut instances = 0;
    let mut bad = Vec::new();
    for code in 0..3u32.pow(upper.len() as u32) {
        let mut data = vec![f.zero(); 16];
        let mut c = code;
        for &(i, j) in &upper {
            // image of basis vector i has a component on j > i
            data[i * 4 + j] = f.from_int((c % 3) as i64);
            c /= 3;
        }
        let b = poisson_bundle(&f, &Matrix { n: 4, data });
        if !check(Law::RbPoisson, &b).map_err(err)?.passed() {
            continue;
        }
        instances += 1;
        let run = || -> tgraded::Result<bool> {
            let pre = cons::rbpoisson_to_prepoisson(&b, Mode::Fast)?;
            let poi = cons::prepoisson_to_poisson(&pre, Mode::Fast)?;
            Ok(check(Law::PrePoisson, &pre)?.passed() && check(Law::Poisson, &poi)?.passed())
        };
        if !run().map_err(err)? {
            bad.push(format!("#{code}"));
        }
    }
    if instances < 2 {
        return Err(format!("only {instances} Rota-Baxter Poisson instances"));
    }
    fail_if(bad, format!("{instances} weight-zero Rota-Baxter Poisson instances over F3[Z/2]"))
}

fn c12_tables() -> Verdict {
    let tables = paper::table_reports(None, opts()).map_err(err)?;
    let mut bad = Vec::new();
    for t in &tables {
        if !t.derived_pass() {
            bad.push(format!("{} derived structure fails", t.id));
        }
        if !t.all_confirmed() {
            bad.push(format!("{} unconfirmed diff", t.id));
        }
    }
    let first = tables.iter().find(|t| t.id == "15.12(1)").ok_or("table 15.12(1) missing")?;
    let flagged = first.diffs.iter().any(|d| d.family == "prec" && d.left == (0, 0) && d.right == (0, 1));
    if !flagged {
        bad.push("15.12(1) does not flag u1·1_π ≺ u1·q".into());
    }
    let lines: usize = tables.iter().map(|t| t.diffs.len()).sum();
    fail_if(bad, format!("{} tables, {lines} confirmed diff lines", tables.len()))
}

fn main() -> ExitCode {
    let t = Instant::now();
    let instances = enumerated_instances();
    println!("setup: {} enumerated instances in {:.2}s", instances.len(), t.elapsed().as_secs_f64());
    let criteria: Vec<(u32, &str, u64, Box<dyn Fn() -> Verdict + '_>)> = vec![
        (1, "listed operators are Rota-Baxter", 10, Box::new(c1_operators)),
        (2, "listed pairs are Rota-Baxter pairs", 20, Box::new(c2_pairs)),
        (3, "group-algebra lifts", 30, Box::new(c3_lifts)),
        (4, "constructions and route coherence", 60, Box::new(|| c4_constructions(&instances))),
        (5, "search recovers listed families", 30, Box::new(c5_search)),
        (6, "factorization and converse", 20, Box::new(|| c6_atkinson(&instances))),
        (7, "left-linear equivalence", 10, Box::new(c7_left_linear)),
        (8, "idempotent consequences", 10, Box::new(|| c8_idempotent(&instances))),
        (9, "dualization pairs laws", 60, Box::new(|| c9_duality(&instances))),
        (10, "semi-Hopf listings", 10, Box::new(c10_semi_hopf)),
        (11, "Poisson constructions", 60, Box::new(c11_poisson)),
        (12, "printed table diffs", 90, Box::new(c12_tables)),
    ];
    let mut unexpected = 0;
    for (n, name, limit, f) in &criteria {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(|| f())).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*limit);
        let pass = verdict.is_ok() && in_time;
        let known = KNOWN_RED.contains(n);
        let status = match (pass, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known red)",
            (false, false) => "FAIL",
            (true, true) => "PASS (known red now passes)",
        };
        if pass == known {
            unexpected += 1;
        }
        let detail = verdict.unwrap_or_else(|e| e);
        let timing = if in_time { String::new() } else { " over budget".into() };
        println!("criterion {n:>2} {name}: {status} [{:.2}s / {limit}s{timing}] {detail}", took.as_secs_f64());
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria differ from their expected status");
        ExitCode::FAILURE
    }
}
