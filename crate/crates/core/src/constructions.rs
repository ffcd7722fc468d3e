//! Transformations between structures. In checked mode every constructor
//! verifies its hypotheses first and re-runs the target checker on its output.

use crate::error::{Error, Result};
use crate::grading::{GradeTable, GradedSpace};
use crate::laws::{check, run, Ctx, Identity, Law, LawReport};
use crate::scalar::{Field, FieldElement};
use crate::structures::{
    add, axpy, basis, scale, sub, Algebra, BilinearFamily, Bundle, Matrix, OperatorFamily, Vector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Checked,
    /// Skips hypothesis and postcondition checks; for inner loops and for
    /// deriving tables from data that is not known to satisfy the axioms.
    Fast,
}

fn require(law: Law, b: &Bundle, mode: Mode) -> Result<()> {
    if mode == Mode::Checked {
        let r = check(law, b)?;
        if !r.passed() {
            return Err(Error::Hypothesis(Box::new(r)));
        }
    }
    Ok(())
}

fn ensure(law: Law, out: Bundle, mode: Mode) -> Result<Bundle> {
    if mode == Mode::Checked {
        let r = check(law, &out)?;
        if !r.passed() {
            return Err(Error::Postcondition(Box::new(r)));
        }
    }
    Ok(out)
}

fn derived(b: &Bundle, kind: &str, families: Vec<(&str, BilinearFamily<FieldElement>)>) -> Bundle {
    let mut out: Bundle = b.empty_like(kind);
    out.operators = b.operators.clone();
    for (name, f) in families {
        out.bilinear.insert(name.to_string(), f);
    }
    out
}

fn from_products(b: &Bundle, f: impl FnMut(usize, usize, usize, usize) -> Vector) -> BilinearFamily<FieldElement> {
    BilinearFamily::from_products(&b.grades, &b.space, f)
}

fn weight_of(b: &Bundle) -> Result<FieldElement> {
    Ok(b.operator("R")?.weight.clone())
}

fn require_weight_zero(b: &Bundle) -> Result<()> {
    let w = weight_of(b)?;
    if !w.is_zero() {
        return Err(Error::NonZeroWeight(w.to_string()));
    }
    Ok(())
}

/// `R̃_φ = −λ·id − R_φ`.
pub fn tilde_operator(r: &OperatorFamily<FieldElement>) -> OperatorFamily<FieldElement> {
    let w = r.weight.clone();
    let sp = GradedSpace { dims: r.dims.clone() };
    OperatorFamily::from_fn(&sp, w.clone(), |g, i, j| {
        let m = r.get(g, i, j);
        if i == j {
            -&w - m.clone()
        } else {
            -m
        }
    })
}

/// Replaces `R` by its tilde; in checked mode a passing input must give a passing output.
pub fn tilde_bundle(b: &Bundle, mode: Mode) -> Result<Bundle> {
    let mut out = b.clone();
    out.operators.insert("R".into(), tilde_operator(b.operator("R")?));
    if mode == Mode::Checked && check(Law::RotaBaxter, b)?.passed() {
        return ensure(Law::RotaBaxter, out, mode);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtkinsonWitness {
    pub p: usize,
    pub q: usize,
    pub a: Vector,
    pub b: Vector,
    pub c: Vector,
}

/// Both sides of the two factorization clauses for a candidate witness.
fn atkinson_sides(cx: Ctx<'_>, p: usize, a: &[FieldElement], q: usize, b: &[FieldElement], c: &[FieldElement]) -> Result<[(Vector, Vector); 2]> {
    let mul = cx.op("mul")?;
    let (r, w) = cx.operator("R")?;
    let pq = cx.pq(p, q);
    let tilde = |g: usize, v: &[FieldElement]| sub(&scale(&-&w, v), &r(g, v));
    let first = (mul(p, &r(p, a), q, &r(q, b)), r(pq, c));
    let second = (mul(p, &tilde(p, a), q, &tilde(q, b)), scale(&cx.f.from_int(-1), &tilde(pq, c)));
    Ok([first, second])
}

fn atkinson_c(cx: Ctx<'_>, p: usize, a: &[FieldElement], q: usize, b: &[FieldElement]) -> Result<Vector> {
    let mul = cx.op("mul")?;
    let (r, w) = cx.operator("R")?;
    Ok(add(&add(&mul(p, &r(p, a), q, b), &mul(p, a, q, &r(q, b))), &scale(&w, &mul(p, a, q, b))))
}

pub fn atkinson_factorize(bundle: &Bundle, p: usize, a: &[FieldElement], q: usize, b: &[FieldElement]) -> Result<AtkinsonWitness> {
    if weight_of(bundle)?.is_zero() {
        return Err(Error::ZeroWeight);
    }
    let cx = Ctx::new(bundle);
    let c = atkinson_c(cx, p, a, q, b)?;
    for (i, (l, r)) in atkinson_sides(cx, p, a, q, b, &c)?.iter().enumerate() {
        if l != r {
            return Err(Error::HypothesisText(format!(
                "factorization clause {} fails at grades ({},{}); operator is not Rota-Baxter",
                i + 1,
                bundle.grades.name(p),
                bundle.grades.name(q)
            )));
        }
    }
    Ok(AtkinsonWitness { p, q, a: a.to_vec(), b: b.to_vec(), c })
}

/// Certifies the Rota-Baxter identity from per-basis-pair witnesses.
pub fn atkinson_converse_check(
    bundle: &Bundle,
    witness: impl Fn(usize, usize, usize, usize) -> Vector,
) -> Result<LawReport> {
    if weight_of(bundle)?.is_zero() {
        return Err(Error::ZeroWeight);
    }
    bundle.validate()?;
    let cx = Ctx::new(bundle);
    let witness = &witness;
    let shape = move |g: &[usize]| cx.dims(g);
    let clause = |k: usize| {
        move |g: &[usize], i: &[usize]| {
            let (a, b) = (cx.e(g[0], i[0]), cx.e(g[1], i[1]));
            let c = witness(g[0], i[0], g[1], i[1]);
            atkinson_sides(cx, g[0], &a, g[1], &b, &c).expect("validated")[k].clone()
        }
    };
    let ids = vec![
        Identity::new("atkinson-first", 2, shape, clause(0)),
        Identity::new("atkinson-second", 2, shape, clause(1)),
        Identity::new("witness-reconstruction", 2, shape, move |g, i| {
            let (a, b) = (cx.e(g[0], i[0]), cx.e(g[1], i[1]));
            (witness(g[0], i[0], g[1], i[1]), atkinson_c(cx, g[0], &a, g[1], &b).expect("validated"))
        }),
        Identity::new("rota-baxter-from-witness", 2, shape, move |g, i| {
            let (a, b) = (cx.e(g[0], i[0]), cx.e(g[1], i[1]));
            let c = atkinson_c(cx, g[0], &a, g[1], &b).expect("validated");
            atkinson_sides(cx, g[0], &a, g[1], &b, &c).expect("validated")[0].clone()
        }),
    ];
    Ok(run("atkinson-converse", &bundle.grades, &ids))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Idempotency {
    pub idempotent: bool,
    pub quasi_idempotent: bool,
}

pub fn quasi_idempotency_test(r: &OperatorFamily<FieldElement>, field: &Field) -> Idempotency {
    let mut idem = true;
    let mut quasi = true;
    for (g, &d) in r.dims.iter().enumerate() {
        for i in 0..d {
            let img = r.image(g, i).to_vec();
            let sq = r.apply(g, &img, field);
            idem &= sq == img;
            quasi &= sq == scale(&-&r.weight, &img);
        }
    }
    Idempotency { idempotent: idem, quasi_idempotent: quasi }
}

/// For a left A-linear operator on a unital bundle, the Rota-Baxter identity
/// holds exactly when the operator is quasi-idempotent.
pub fn left_linear_equivalence(b: &Bundle) -> Result<LawReport> {
    let unit = b.grades.require_unit()?;
    if b.unit.is_none() {
        return Err(Error::Missing("unit".into()));
    }
    let cx = Ctx::new(b);
    let mul = cx.op("mul")?;
    let (r, _) = cx.operator("R")?;
    let linear = run(
        "left-linearity",
        &b.grades,
        &[Identity::new("left-linearity", 2, move |g: &[usize]| cx.dims(g), move |g, i| {
            let (a, c) = (cx.e(g[0], i[0]), cx.e(g[1], i[1]));
            (r(cx.pq(g[0], g[1]), &mul(g[0], &a, g[1], &c)), mul(g[0], &a, g[1], &r(g[1], &c)))
        })],
    );
    if !linear.passed() {
        return Err(Error::Hypothesis(Box::new(linear)));
    }
    let _ = unit;
    let rb = check(Law::RotaBaxter, b)?;
    let quasi = quasi_idempotency_test(b.operator("R")?, &b.field).quasi_idempotent;
    let mut report = LawReport::pass("left-linear-equivalence", linear.checked + rb.checked);
    if rb.passed() != quasi {
        report.verdict = crate::laws::Verdict::Fail;
        report.counterexample = rb.counterexample.clone();
        report.law = format!(
            "left-linear-equivalence (rota-baxter {}, quasi-idempotent {})",
            rb.verdict_text(),
            quasi
        );
    }
    Ok(report)
}

/// Consequences of idempotency: `(1+λ)R(aR(b)) = 0`, `(1+λ)R(R(a)b) = 0`
/// and `(1+λ)(R(a)R(b) − λR(ab)) = 0`.
pub fn idempotent_consequences(b: &Bundle) -> Result<LawReport> {
    require(Law::RotaBaxter, b, Mode::Checked)?;
    if !quasi_idempotency_test(b.operator("R")?, &b.field).idempotent {
        return Err(Error::HypothesisText("operator is not idempotent".into()));
    }
    b.validate()?;
    let cx = Ctx::new(b);
    let mul = std::rc::Rc::new(cx.op("mul")?);
    let (r, w) = cx.operator("R")?;
    let r = std::rc::Rc::new(r);
    let factor = &cx.f.one() + &w;
    let shape = move |g: &[usize]| cx.dims(g);
    let (m1, m2, m3) = (mul.clone(), mul.clone(), mul);
    let (r1, r2, r3) = (r.clone(), r.clone(), r);
    let (f1, f2, f3) = (factor.clone(), factor.clone(), factor);
    let ids = vec![
        Identity::new("idempotent-right", 2, shape, move |g, i| {
            let (a, c) = (cx.e(g[0], i[0]), cx.e(g[1], i[1]));
            let pq = cx.pq(g[0], g[1]);
            (scale(&f1, &r1(pq, &m1(g[0], &a, g[1], &r1(g[1], &c)))), cx.zero(pq))
        }),
        Identity::new("idempotent-left", 2, shape, move |g, i| {
            let (a, c) = (cx.e(g[0], i[0]), cx.e(g[1], i[1]));
            let pq = cx.pq(g[0], g[1]);
            (scale(&f2, &r2(pq, &m2(g[0], &r2(g[0], &a), g[1], &c))), cx.zero(pq))
        }),
        Identity::new("idempotent-product", 2, shape, move |g, i| {
            let (a, c) = (cx.e(g[0], i[0]), cx.e(g[1], i[1]));
            let pq = cx.pq(g[0], g[1]);
            let rr = m3(g[0], &r3(g[0], &a), g[1], &r3(g[1], &c));
            let rab = scale(&w, &r3(pq, &m3(g[0], &a, g[1], &c)));
            (scale(&f3, &sub(&rr, &rab)), cx.zero(pq))
        }),
    ];
    Ok(run("idempotent-consequences", &b.grades, &ids))
}

/// `A[π]` with `μ(h p ⊗ g q) = (hg)(pq)` and operator `ops[φ]` on grade φ
/// (a single matrix is used on every grade). No hypotheses are checked.
pub fn group_algebra_bundle(alg: &Algebra<FieldElement>, ops: &[Matrix<FieldElement>], weight: &FieldElement, g: &GradeTable) -> Result<Bundle> {
    let field = weight.field();
    let n = alg.dim;
    if !(ops.len() == 1 || ops.len() == g.len()) || ops.iter().any(|m| m.n != n) {
        return Err(Error::Shape("one operator matrix, or one per grade, of the algebra's dimension".into()));
    }
    let sp = GradedSpace::uniform(g, n);
    let mul = BilinearFamily::from_fn(g, &sp, |_, _, i, j, k| alg.product(i, j)[k].clone());
    let op = OperatorFamily::from_fn(&sp, weight.clone(), |phi, i, j| {
        ops[if ops.len() == 1 { 0 } else { phi }].image(i)[j].clone()
    });
    let mut b = Bundle::new("rota-baxter-t-algebra", field, g.clone(), sp).with_family("mul", mul).with_operator("R", op);
    if g.unit().is_some() {
        b.unit = alg.unit.clone();
    }
    Ok(b)
}

pub fn lift_group_algebra(alg: &Algebra<FieldElement>, r: &Matrix<FieldElement>, weight: &FieldElement, g: &GradeTable) -> Result<Bundle> {
    let field = weight.field();
    let classical = alg.to_bundle(&field).with_operator(
        "R",
        OperatorFamily::from_fn(&GradedSpace { dims: vec![alg.dim] }, weight.clone(), |_, i, j| r.image(i)[j].clone()),
    );
    require(Law::RotaBaxter, &classical, Mode::Checked)?;
    ensure(Law::RotaBaxter, group_algebra_bundle(alg, std::slice::from_ref(r), weight, g)?, Mode::Checked)
}

/// Two operators on one algebra with a common weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RBPair {
    pub r: Matrix<FieldElement>,
    pub r_prime: Matrix<FieldElement>,
    pub weight: FieldElement,
}

/// Pair identities `R(h)R′(g) = R′(R(h)g + hR′(g) + λhg)` and
/// `R′(h)R(g) = R′(R′(h)g + hR(g) + λhg)`, plus the classical identity for each operator.
pub fn check_rb_pair(pair: &RBPair, alg: &Algebra<FieldElement>) -> LawReport {
    let field = pair.weight.field();
    let n = alg.dim;
    let (f, alg) = (&field, alg);
    let e = move |i: usize| basis(f, n, i);
    let w = &pair.weight;
    // x(h)y(g) vs z(x(h)g + h y(g) + λhg)
    let mixed = move |x: &Matrix<FieldElement>, y: &Matrix<FieldElement>, z: &Matrix<FieldElement>, i: &[usize]| {
        let (h, g) = (e(i[0]), e(i[1]));
        let (xh, yg) = (x.apply(&h, f), y.apply(&g, f));
        let lhs = alg.mul(&xh, &yg, f);
        let mut inner = alg.mul(&xh, &g, f);
        inner = add(&inner, &alg.mul(&h, &yg, f));
        axpy(&mut inner, w, &alg.mul(&h, &g, f));
        (lhs, z.apply(&inner, f))
    };
    let (r, rp) = (&pair.r, &pair.r_prime);
    let shape = move |_: &[usize]| vec![n, n];
    let ids = vec![
        Identity::new("rota-baxter-first-operator", 1, shape, move |_, i| mixed(r, r, r, i)),
        Identity::new("rota-baxter-second-operator", 1, shape, move |_, i| mixed(rp, rp, rp, i)),
        Identity::new("pair-first", 1, shape, move |_, i| mixed(r, rp, rp, i)),
        Identity::new("pair-second", 1, shape, move |_, i| mixed(rp, r, rp, i)),
    ];
    run("rb-pair", &GradeTable::trivial(), &ids)
}

/// Operator `R` on grade 1 and `R′` on grade q of `A[{1,q}]`.
pub fn lift_rb_pair(pair: &RBPair, alg: &Algebra<FieldElement>) -> Result<Bundle> {
    let r = check_rb_pair(pair, alg);
    if !r.passed() {
        return Err(Error::Hypothesis(Box::new(r)));
    }
    let g = GradeTable::unit_idempotent();
    let b = group_algebra_bundle(alg, &[pair.r.clone(), pair.r_prime.clone()], &pair.weight, &g)?;
    ensure(Law::RotaBaxter, b, Mode::Checked)
}

pub fn rb_to_tridendriform(b: &Bundle, mode: Mode) -> Result<Bundle> {
    require(Law::RotaBaxter, b, mode)?;
    let cx = Ctx::new(b);
    let mul = cx.op("mul")?;
    let (r, w) = cx.operator("R")?;
    let prec = from_products(b, |p, q, i, j| mul(p, &cx.e(p, i), q, &r(q, &cx.e(q, j))));
    let succ = from_products(b, |p, q, i, j| mul(p, &r(p, &cx.e(p, i)), q, &cx.e(q, j)));
    let dot = from_products(b, |p, q, i, j| scale(&w, &mul(p, &cx.e(p, i), q, &cx.e(q, j))));
    let out = derived(b, "tridendriform-t-algebra", vec![("prec", prec), ("succ", succ), ("dot", dot)]);
    ensure(Law::Tridendriform, out, mode)
}

pub fn rb_to_dendriform(b: &Bundle, mode: Mode) -> Result<Bundle> {
    require(Law::RotaBaxter, b, mode)?;
    let cx = Ctx::new(b);
    let mul = cx.op("mul")?;
    let (r, w) = cx.operator("R")?;
    let prec = from_products(b, |p, q, i, j| {
        let (a, c) = (cx.e(p, i), cx.e(q, j));
        add(&mul(p, &a, q, &r(q, &c)), &scale(&w, &mul(p, &a, q, &c)))
    });
    let succ = from_products(b, |p, q, i, j| mul(p, &r(p, &cx.e(p, i)), q, &cx.e(q, j)));
    let out = derived(b, "dendriform-t-algebra", vec![("prec", prec), ("succ", succ)]);
    ensure(Law::Dendriform, out, mode)
}

pub fn tridend_to_dend(b: &Bundle, mode: Mode) -> Result<Bundle> {
    require(Law::Tridendriform, b, mode)?;
    let prec = b.family("prec")?.combine(b.family("dot")?, |x, y| x + y);
    let out = derived(b, "dendriform-t-algebra", vec![("prec", prec), ("succ", b.family("succ")?.clone())]);
    ensure(Law::Dendriform, out, mode)
}

pub fn dend_sum_product(b: &Bundle, mode: Mode) -> Result<Bundle> {
    require(Law::Dendriform, b, mode)?;
    let mul = b.family("prec")?.combine(b.family("succ")?, |x, y| x + y);
    ensure(Law::TAlgebra { unital: false, commutative: false }, derived(b, "t-algebra", vec![("mul", mul)]), mode)
}

pub fn tridend_sum_product(b: &Bundle, mode: Mode) -> Result<Bundle> {
    require(Law::Tridendriform, b, mode)?;
    let mul = b
        .family("prec")?
        .combine(b.family("dot")?, |x, y| x + y)
        .combine(b.family("succ")?, |x, y| x + y);
    ensure(Law::TAlgebra { unital: false, commutative: false }, derived(b, "t-algebra", vec![("mul", mul)]), mode)
}

/// `a⋄b = a·R(b) + R(a)·b + λa·b`; checked mode also verifies `R(a)R(b) = R(a⋄b)`.
pub fn rb_double_product(b: &Bundle, mode: Mode) -> Result<Bundle> {
    require(Law::RotaBaxter, b, mode)?;
    let cx = Ctx::new(b);
    let mul = cx.op("mul")?;
    let (r, w) = cx.operator("R")?;
    let dia = from_products(b, |p, q, i, j| {
        let (a, c) = (cx.e(p, i), cx.e(q, j));
        let mut v = add(&mul(p, &a, q, &r(q, &c)), &mul(p, &r(p, &a), q, &c));
        axpy(&mut v, &w, &mul(p, &a, q, &c));
        v
    });
    let out = derived(b, "rota-baxter-t-algebra", vec![("mul", dia)]);
    if mode == Mode::Checked {
        let ocx = Ctx::new(&out);
        let dia = ocx.op("mul")?;
        let remark = run(
            "double-product",
            &b.grades,
            &[Identity::new("double-product", 2, move |g: &[usize]| cx.dims(g), move |g, i| {
                let (a, c) = (cx.e(g[0], i[0]), cx.e(g[1], i[1]));
                (mul(g[0], &r(g[0], &a), g[1], &r(g[1], &c)), r(cx.pq(g[0], g[1]), &dia(g[0], &a, g[1], &c)))
            })],
        );
        if !remark.passed() {
            return Err(Error::Postcondition(Box::new(remark)));
        }
    }
    ensure(Law::TAlgebra { unital: false, commutative: false }, out, mode)
}

/// `[a,b] = x(a,b) − x(b,a)` at swapped grades for the family `x`.
fn commutator(b: &Bundle, name: &str) -> Result<BilinearFamily<FieldElement>> {
    b.grades.require_commutative()?;
    let f = b.family(name)?;
    Ok(BilinearFamily::from_fn(&b.grades, &b.space, |p, q, i, j, k| f.get(p, q, i, j, k) - f.get(q, p, j, i, k)))
}

/// `a∗b = a≻b − b≺a`.
pub fn dend_to_prelie(b: &Bundle, mode: Mode) -> Result<Bundle> {
    b.grades.require_commutative()?;
    require(Law::Dendriform, b, mode)?;
    let (prec, succ) = (b.family("prec")?, b.family("succ")?);
    let ast = BilinearFamily::from_fn(&b.grades, &b.space, |p, q, i, j, k| succ.get(p, q, i, j, k) - prec.get(q, p, j, i, k));
    ensure(Law::PreLie, derived(b, "pre-lie-t-algebra", vec![("ast", ast)]), mode)
}

pub fn assoc_to_lie(b: &Bundle, mode: Mode) -> Result<Bundle> {
    b.grades.require_commutative()?;
    require(Law::TAlgebra { unital: false, commutative: false }, b, mode)?;
    let out = derived(b, "lie-t-algebra", vec![("bracket", commutator(b, "mul")?)]);
    ensure(Law::Lie, out, mode)
}

pub fn prelie_to_lie(b: &Bundle, mode: Mode) -> Result<Bundle> {
    require(Law::PreLie, b, mode)?;
    let out = derived(b, "lie-t-algebra", vec![("bracket", commutator(b, "ast")?)]);
    ensure(Law::Lie, out, mode)
}

/// `a∗b = [R(a), b]` for a weight-zero operator.
pub fn rb_lie_to_prelie(b: &Bundle, mode: Mode) -> Result<Bundle> {
    b.grades.require_commutative()?;
    require_weight_zero(b)?;
    require(Law::Lie, b, mode)?;
    require(Law::RbLie, b, mode)?;
    let cx = Ctx::new(b);
    let br = cx.op("bracket")?;
    let (r, _) = cx.operator("R")?;
    let ast = from_products(b, |p, q, i, j| br(p, &r(p, &cx.e(p, i)), q, &cx.e(q, j)));
    ensure(Law::PreLie, derived(b, "pre-lie-t-algebra", vec![("ast", ast)]), mode)
}

/// `a⋆b = a≻b`, valid when `a≻b = b≺a` at swapped grades.
pub fn comm_dend_to_zinbiel(b: &Bundle, mode: Mode) -> Result<Bundle> {
    b.grades.require_commutative()?;
    require(Law::Dendriform, b, mode)?;
    let (prec, succ) = (b.family("prec")?, b.family("succ")?);
    for (p, q, i, j, k, v) in succ.entries() {
        if v != prec.get(q, p, j, i, k) {
            return Err(Error::HypothesisText(format!(
                "not commutative: u{}@{} ≻ u{}@{} differs from u{}@{} ≺ u{}@{}",
                i + 1,
                b.grades.name(p),
                j + 1,
                b.grades.name(q),
                j + 1,
                b.grades.name(q),
                i + 1,
                b.grades.name(p)
            )));
        }
    }
    ensure(Law::Zinbiel, derived(b, "zinbiel-t-algebra", vec![("star", succ.clone())]), mode)
}

/// `a∗b = R(a)·b − b·R(a) − λb·a`; checked mode also compares with the
/// route through the dendriform structure.
pub fn rb_to_prelie_direct(b: &Bundle, mode: Mode) -> Result<Bundle> {
    b.grades.require_commutative()?;
    require(Law::RotaBaxter, b, mode)?;
    let cx = Ctx::new(b);
    let mul = cx.op("mul")?;
    let (r, w) = cx.operator("R")?;
    let ast = from_products(b, |p, q, i, j| {
        let (a, c) = (cx.e(p, i), cx.e(q, j));
        let ra = r(p, &a);
        let mut v = sub(&mul(p, &ra, q, &c), &mul(q, &c, p, &ra));
        axpy(&mut v, &-&w, &mul(q, &c, p, &a));
        v
    });
    let out = derived(b, "pre-lie-t-algebra", vec![("ast", ast)]);
    if mode == Mode::Checked {
        let composite = dend_to_prelie(&rb_to_dendriform(b, Mode::Fast)?, Mode::Fast)?;
        if composite.family("ast")? != out.family("ast")? {
            return Err(Error::HypothesisText("direct pre-Lie product differs from the dendriform route".into()));
        }
    }
    ensure(Law::PreLie, out, mode)
}

/// `a⋆b = R(a)·b` under `R(a)·b = b·R(a) + λb·a`.
pub fn rb_to_zinbiel(b: &Bundle, mode: Mode) -> Result<Bundle> {
    b.grades.require_commutative()?;
    require(Law::RotaBaxter, b, mode)?;
    let cx = Ctx::new(b);
    let mul = cx.op("mul")?;
    let (r, w) = cx.operator("R")?;
    for p in 0..b.grades.len() {
        for q in 0..b.grades.len() {
            for i in 0..cx.dim(p) {
                for j in 0..cx.dim(q) {
                    let (a, c) = (cx.e(p, i), cx.e(q, j));
                    let ra = r(p, &a);
                    let mut rhs = mul(q, &c, p, &ra);
                    axpy(&mut rhs, &w, &mul(q, &c, p, &a));
                    if mul(p, &ra, q, &c) != rhs {
                        return Err(Error::HypothesisText(format!(
                            "R(a)·b ≠ b·R(a) + λb·a at a = u{}@{}, b = u{}@{}",
                            i + 1,
                            b.grades.name(p),
                            j + 1,
                            b.grades.name(q)
                        )));
                    }
                }
            }
        }
    }
    let star = from_products(b, |p, q, i, j| mul(p, &r(p, &cx.e(p, i)), q, &cx.e(q, j)));
    ensure(Law::Zinbiel, derived(b, "zinbiel-t-algebra", vec![("star", star)]), mode)
}

/// `a≺b = b⋆a`, `a≻b = a⋆b`; checked mode also verifies `a⋆(b⋆c) = b⋆(a⋆c)` on the input.
pub fn zinbiel_to_dend(b: &Bundle, mode: Mode) -> Result<Bundle> {
    b.grades.require_commutative()?;
    require(Law::Zinbiel, b, mode)?;
    if mode == Mode::Checked {
        let cx = Ctx::new(b);
        let star = cx.op("star")?;
        let r = run(
            "zinbiel-symmetry",
            &b.grades,
            &[Identity::new("zinbiel-symmetry", 3, move |g: &[usize]| cx.dims(g), move |g, i| {
                let (p, q, t) = (g[0], g[1], g[2]);
                let (a, bb, c) = (cx.e(p, i[0]), cx.e(q, i[1]), cx.e(t, i[2]));
                (star(p, &a, cx.pq(q, t), &star(q, &bb, t, &c)), star(q, &bb, cx.pq(p, t), &star(p, &a, t, &c)))
            })],
        );
        if !r.passed() {
            return Err(Error::Postcondition(Box::new(r)));
        }
    }
    let star = b.family("star")?;
    let prec = BilinearFamily::from_fn(&b.grades, &b.space, |p, q, i, j, k| star.get(q, p, j, i, k).clone());
    ensure(Law::Dendriform, derived(b, "dendriform-t-algebra", vec![("prec", prec), ("succ", star.clone())]), mode)
}

fn symmetrized(b: &Bundle, name: &str) -> Result<BilinearFamily<FieldElement>> {
    b.grades.require_commutative()?;
    let f = b.family(name)?;
    Ok(BilinearFamily::from_fn(&b.grades, &b.space, |p, q, i, j, k| f.get(p, q, i, j, k) + f.get(q, p, j, i, k)))
}

/// `a⋄b = a⋆b + b⋆a`.
pub fn zinbiel_to_assoc(b: &Bundle, mode: Mode) -> Result<Bundle> {
    require(Law::Zinbiel, b, mode)?;
    let out = derived(b, "t-algebra", vec![("mul", symmetrized(b, "star")?)]);
    ensure(Law::TAlgebra { unital: false, commutative: true }, out, mode)
}

/// `a⋄b = a⋆b + b⋆a`, `[a,b] = a∗b − b∗a`.
pub fn prepoisson_to_poisson(b: &Bundle, mode: Mode) -> Result<Bundle> {
    require(Law::PrePoisson, b, mode)?;
    let out = derived(
        b,
        "poisson-t-algebra",
        vec![("mul", symmetrized(b, "star")?), ("bracket", commutator(b, "ast")?)],
    );
    ensure(Law::Poisson, out, mode)
}

/// `a⋆b = R(a)·b`, `a∗b = [R(a), b]` for a weight-zero operator.
pub fn rbpoisson_to_prepoisson(b: &Bundle, mode: Mode) -> Result<Bundle> {
    b.grades.require_commutative()?;
    require_weight_zero(b)?;
    require(Law::RbPoisson, b, mode)?;
    let cx = Ctx::new(b);
    let mul = cx.op("mul")?;
    let br = cx.op("bracket")?;
    let (r, _) = cx.operator("R")?;
    let star = from_products(b, |p, q, i, j| mul(p, &r(p, &cx.e(p, i)), q, &cx.e(q, j)));
    let ast = from_products(b, |p, q, i, j| br(p, &r(p, &cx.e(p, i)), q, &cx.e(q, j)));
    ensure(Law::PrePoisson, derived(b, "pre-poisson-t-algebra", vec![("star", star), ("ast", ast)]), mode)
}

pub const CONSTRUCTIONS: &[&str] = &[
    "tilde",
    "rb-to-tridendriform",
    "rb-to-dendriform",
    "tridend-to-dend",
    "dend-sum-product",
    "tridend-sum-product",
    "rb-double-product",
    "dend-to-prelie",
    "assoc-to-lie",
    "prelie-to-lie",
    "rb-lie-to-prelie",
    "comm-dend-to-zinbiel",
    "rb-to-prelie-direct",
    "rb-to-zinbiel",
    "zinbiel-to-dend",
    "zinbiel-to-assoc",
    "prepoisson-to-poisson",
    "rbpoisson-to-prepoisson",
    "coalg-split-dendriform",
    "coalg-split-tridendriform",
    "coalg-sum-dendriform",
    "coalg-sum-tridendriform",
];

/// Runs a construction by name.
pub fn derive(name: &str, b: &Bundle, mode: Mode) -> Result<Bundle> {
    use crate::coalgebra as co;
    use crate::laws::Variant;
    match name {
        "tilde" => tilde_bundle(b, mode),
        "rb-to-tridendriform" => rb_to_tridendriform(b, mode),
        "rb-to-dendriform" => rb_to_dendriform(b, mode),
        "tridend-to-dend" => tridend_to_dend(b, mode),
        "dend-sum-product" => dend_sum_product(b, mode),
        "tridend-sum-product" => tridend_sum_product(b, mode),
        "rb-double-product" => rb_double_product(b, mode),
        "dend-to-prelie" => dend_to_prelie(b, mode),
        "assoc-to-lie" => assoc_to_lie(b, mode),
        "prelie-to-lie" => prelie_to_lie(b, mode),
        "rb-lie-to-prelie" => rb_lie_to_prelie(b, mode),
        "comm-dend-to-zinbiel" => comm_dend_to_zinbiel(b, mode),
        "rb-to-prelie-direct" => rb_to_prelie_direct(b, mode),
        "rb-to-zinbiel" => rb_to_zinbiel(b, mode),
        "zinbiel-to-dend" => zinbiel_to_dend(b, mode),
        "zinbiel-to-assoc" => zinbiel_to_assoc(b, mode),
        "prepoisson-to-poisson" => prepoisson_to_poisson(b, mode),
        "rbpoisson-to-prepoisson" => rbpoisson_to_prepoisson(b, mode),
        "coalg-split-dendriform" => co::coalg_split_from_rb(b, Variant::Dendriform, mode),
        "coalg-split-tridendriform" => co::coalg_split_from_rb(b, Variant::Tridendriform, mode),
        "coalg-sum-dendriform" => co::coalg_sum_coproduct(b, Variant::Dendriform, mode),
        "coalg-sum-tridendriform" => co::coalg_sum_coproduct(b, Variant::Tridendriform, mode),
        _ => Err(Error::Usage(format!("unknown construction `{name}` (known: {})", CONSTRUCTIONS.join(", ")))),
    }
}

/// The composite-route identities, as `(name, holds)`. The two routes through
/// pre-Lie products are only defined over commutative gradings.
pub fn coherence(b: &Bundle) -> Result<Vec<(&'static str, bool)>> {
    let dend = rb_to_dendriform(b, Mode::Fast)?;
    let tri = rb_to_tridendriform(b, Mode::Fast)?;
    let mut out = vec![
        ("tridendriform-then-dendriform", tridend_to_dend(&tri, Mode::Fast)?.bilinear == dend.bilinear),
        (
            "dendriform-sum-equals-double-product",
            dend_sum_product(&dend, Mode::Fast)?.family("mul")? == rb_double_product(b, Mode::Fast)?.family("mul")?,
        ),
    ];
    if b.grades.is_commutative() {
        let prelie = dend_to_prelie(&dend, Mode::Fast)?;
        out.push(("direct-pre-lie", rb_to_prelie_direct(b, Mode::Fast)?.family("ast")? == prelie.family("ast")?));
        let via_prelie = prelie_to_lie(&prelie, Mode::Fast)?;
        let via_sum = assoc_to_lie(&dend_sum_product(&dend, Mode::Fast)?, Mode::Fast)?;
        out.push(("lie-bracket-routes", via_prelie.family("bracket")? == via_sum.family("bracket")?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn two_dim(f: &Field) -> Algebra<FieldElement> {
        corpus::two_dim().try_map(|&x| Ok(f.from_int(x))).unwrap()
    }

    fn mat(f: &Field, n: usize, xs: &[i64]) -> Matrix<FieldElement> {
        Matrix { n, data: xs.iter().map(|&x| f.from_int(x)).collect() }
    }

    #[test]
    fn tilde_examples() {
        let f = Field::Rational;
        let sp = GradedSpace { dims: vec![2, 2] };
        let w = f.from_int(2);
        let minus = OperatorFamily::scalar(&sp, &-&w, w.clone());
        let zero = OperatorFamily::scalar(&sp, &f.zero(), w.clone());
        assert_eq!(tilde_operator(&minus), zero);
        assert_eq!(tilde_operator(&zero), minus);
        let some = OperatorFamily::from_fn(&sp, w, |g, i, j| f.from_int((g + 2 * i + 3 * j) as i64));
        assert_eq!(tilde_operator(&tilde_operator(&some)), some);
    }

    #[test]
    fn atkinson_examples() {
        let f = Field::Rational;
        let w = f.from_int(1);
        let alg = two_dim(&f);
        // R(u1) = 0, R(u2) = −λu2
        let b = lift_group_algebra(&alg, &mat(&f, 2, &[0, 0, 0, -1]), &w, &GradeTable::trivial()).unwrap();
        let u2 = basis(&f, 2, 1);
        let wit = atkinson_factorize(&b, 0, &u2, 0, &u2).unwrap();
        assert_eq!(wit.c, vec![f.zero(), f.from_int(-1)]);
        let zero = atkinson_factorize(&b, 0, &[f.zero(), f.zero()], 0, &u2).unwrap();
        assert!(zero.c.iter().all(|x| x.is_zero()));
        let minus = lift_group_algebra(&alg, &mat(&f, 2, &[-1, 0, 0, -1]), &w, &GradeTable::trivial()).unwrap();
        let wit = atkinson_factorize(&minus, 0, &basis(&f, 2, 0), 0, &u2).unwrap();
        assert_eq!(wit.c, vec![f.zero(), f.from_int(-1)]);
    }

    #[test]
    fn atkinson_rejects_zero_weight() {
        let f = Field::Rational;
        let b = lift_group_algebra(&two_dim(&f), &mat(&f, 2, &[0, 0, 0, 0]), &f.zero(), &GradeTable::trivial()).unwrap();
        let err = atkinson_factorize(&b, 0, &basis(&f, 2, 0), 0, &basis(&f, 2, 0)).unwrap_err();
        assert_eq!(err.to_string(), "Atkinson characterization requires λ ≠ 0");
    }

    #[test]
    fn perturbed_witness_fails_converse() {
        let f = Field::Rational;
        let w = f.from_int(1);
        let b = lift_group_algebra(&two_dim(&f), &mat(&f, 2, &[-1, 0, 0, 0]), &w, &GradeTable::unit_idempotent()).unwrap();
        let honest = |p: usize, i: usize, q: usize, j: usize| {
            atkinson_factorize(&b, p, &basis(&f, 2, i), q, &basis(&f, 2, j)).unwrap().c
        };
        assert!(atkinson_converse_check(&b, honest).unwrap().passed());
        let perturbed = |p: usize, i: usize, q: usize, j: usize| add(&honest(p, i, q, j), &basis(&f, 2, 0));
        assert!(!atkinson_converse_check(&b, perturbed).unwrap().passed());
    }

    #[test]
    fn quasi_idempotency_examples() {
        let f = Field::Rational;
        let w = f.from_int(3);
        let sp = GradedSpace { dims: vec![2] };
        let minus = OperatorFamily::scalar(&sp, &-&w, w.clone());
        assert_eq!(quasi_idempotency_test(&minus, &f), Idempotency { idempotent: false, quasi_idempotent: true });
        let zero = OperatorFamily::scalar(&sp, &f.zero(), w.clone());
        assert_eq!(quasi_idempotency_test(&zero, &f), Idempotency { idempotent: true, quasi_idempotent: true });
        // −λ times the idempotent u1 ↦ u1 + u2, u2 ↦ 0
        let h = OperatorFamily::from_fn(&sp, w.clone(), |_, i, j| f.from_int([[-3, -3], [0, 0]][i][j]));
        assert_eq!(quasi_idempotency_test(&h, &f), Idempotency { idempotent: false, quasi_idempotent: true });
        // u1 ↦ −2λu1 + λu2, u2 ↦ −λu1 is Rota-Baxter but R + λ is nilpotent and nonzero
        let skew = OperatorFamily::from_fn(&sp, w, |_, i, j| f.from_int([[-6, 3], [-3, 0]][i][j]));
        assert!(!quasi_idempotency_test(&skew, &f).quasi_idempotent);
    }

    #[test]
    fn pair_checks() {
        let f = Field::Rational;
        let w = f.from_int(1);
        let alg = two_dim(&f);
        let a = mat(&f, 2, &[-1, 0, 0, 0]);
        let b = mat(&f, 2, &[0, 0, 0, -1]);
        let c = mat(&f, 2, &[-1, 0, 0, -1]);
        let ac = RBPair { r: a.clone(), r_prime: c, weight: w.clone() };
        assert!(check_rb_pair(&ac, &alg).passed());
        assert!(check_rb_pair(&RBPair { r: a.clone(), r_prime: a.clone(), weight: w.clone() }, &alg).passed());
        let ab = RBPair { r: a, r_prime: b, weight: w };
        let r = check_rb_pair(&ab, &alg);
        assert!(!r.passed());
        let err = lift_rb_pair(&ab, &alg).unwrap_err();
        assert!(err.to_string().contains("pair-"), "{err}");
        let lifted = lift_rb_pair(&ac, &alg).unwrap();
        assert_eq!(lifted.operator("R").unwrap().get(1, 1, 1), &f.from_int(-1));
    }

    #[test]
    fn weight_zero_constructions_refuse_other_weights() {
        let f = Field::Rational;
        let b = lift_group_algebra(&two_dim(&f), &mat(&f, 2, &[0, 0, 0, 0]), &f.one(), &GradeTable::trivial()).unwrap();
        let b = assoc_to_lie(&b, Mode::Checked).unwrap();
        assert!(matches!(rb_lie_to_prelie(&b, Mode::Checked), Err(Error::NonZeroWeight(_))));
    }

    #[test]
    fn rb_to_dendriform_with_minus_weight_identity() {
        let f = Field::Rational;
        let w = f.from_int(2);
        let b = lift_group_algebra(&two_dim(&f), &mat(&f, 2, &[-2, 0, 0, -2]), &w, &GradeTable::unit_idempotent()).unwrap();
        let d = rb_to_dendriform(&b, Mode::Checked).unwrap();
        assert!(d.family("prec").unwrap().entries().all(|e| e.5.is_zero()));
        let expect = b.family("mul").unwrap().try_map(|x| Ok(-&w * x.clone())).unwrap();
        assert_eq!(d.family("succ").unwrap(), &expect);
        let r = rb_double_product(&b, Mode::Checked).unwrap();
        assert_eq!(r.family("mul").unwrap(), &expect);
    }
}
