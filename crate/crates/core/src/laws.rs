//! Axiom checkers. Every law is a list of identities evaluated on all basis
//! tuples of all grade tuples; the first failure (in lexicographic order of
//! identity, grades, basis) is reported with both sides.

use std::fmt;

use crate::error::{Error, Result};
use crate::grading::{tuples, GradeTable};
use crate::scalar::{format_assignment, Assignment, Field, FieldElement, Specializer};
use crate::structures::{add, basis, scale, sub, zeros, Bundle, ParamBundle, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Dendriform,
    Tridendriform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    TAlgebra { unital: bool, commutative: bool },
    RotaBaxter,
    Dendriform,
    Tridendriform,
    PreLie,
    Lie,
    RbLie,
    Zinbiel,
    Poisson,
    PrePoisson,
    RbPoisson,
    TCoalgebra { counital: bool },
    RbTCoalgebra,
    SplitCoalgebra(Variant),
    SemiHopf,
    Hopf,
    HopfTCoalgebra,
}

pub const LAW_IDS: &[&str] = &[
    "t-algebra",
    "unital-t-algebra",
    "commutative-t-algebra",
    "rota-baxter",
    "dendriform",
    "tridendriform",
    "pre-lie",
    "lie",
    "rb-lie",
    "zinbiel",
    "poisson",
    "pre-poisson",
    "rb-poisson",
    "t-coalgebra",
    "counital-t-coalgebra",
    "rb-t-coalgebra",
    "dendriform-t-coalgebra",
    "tridendriform-t-coalgebra",
    "semi-hopf",
    "hopf",
    "hopf-t-coalgebra",
];

impl Law {
    pub fn parse(id: &str) -> Result<Law> {
        Ok(match id {
            "t-algebra" => Law::TAlgebra { unital: false, commutative: false },
            "unital-t-algebra" => Law::TAlgebra { unital: true, commutative: false },
            "commutative-t-algebra" => Law::TAlgebra { unital: false, commutative: true },
            "rota-baxter" => Law::RotaBaxter,
            "dendriform" => Law::Dendriform,
            "tridendriform" => Law::Tridendriform,
            "pre-lie" => Law::PreLie,
            "lie" => Law::Lie,
            "rb-lie" => Law::RbLie,
            "zinbiel" => Law::Zinbiel,
            "poisson" => Law::Poisson,
            "pre-poisson" => Law::PrePoisson,
            "rb-poisson" => Law::RbPoisson,
            "t-coalgebra" => Law::TCoalgebra { counital: false },
            "counital-t-coalgebra" => Law::TCoalgebra { counital: true },
            "rb-t-coalgebra" => Law::RbTCoalgebra,
            "dendriform-t-coalgebra" => Law::SplitCoalgebra(Variant::Dendriform),
            "tridendriform-t-coalgebra" => Law::SplitCoalgebra(Variant::Tridendriform),
            "semi-hopf" => Law::SemiHopf,
            "hopf" => Law::Hopf,
            "hopf-t-coalgebra" => Law::HopfTCoalgebra,
            _ => return Err(Error::Usage(format!("unknown law `{id}` (known: {})", LAW_IDS.join(", ")))),
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            Law::TAlgebra { unital: true, commutative: true } => "unital-commutative-t-algebra",
            Law::TAlgebra { unital: true, .. } => "unital-t-algebra",
            Law::TAlgebra { commutative: true, .. } => "commutative-t-algebra",
            Law::TAlgebra { .. } => "t-algebra",
            Law::RotaBaxter => "rota-baxter",
            Law::Dendriform => "dendriform",
            Law::Tridendriform => "tridendriform",
            Law::PreLie => "pre-lie",
            Law::Lie => "lie",
            Law::RbLie => "rb-lie",
            Law::Zinbiel => "zinbiel",
            Law::Poisson => "poisson",
            Law::PrePoisson => "pre-poisson",
            Law::RbPoisson => "rb-poisson",
            Law::TCoalgebra { counital: true } => "counital-t-coalgebra",
            Law::TCoalgebra { .. } => "t-coalgebra",
            Law::RbTCoalgebra => "rb-t-coalgebra",
            Law::SplitCoalgebra(Variant::Dendriform) => "dendriform-t-coalgebra",
            Law::SplitCoalgebra(Variant::Tridendriform) => "tridendriform-t-coalgebra",
            Law::SemiHopf => "semi-hopf",
            Law::Hopf => "hopf",
            Law::HopfTCoalgebra => "hopf-t-coalgebra",
        }
    }

    pub(crate) fn identities<'a>(&self, b: &'a Bundle) -> Result<Vec<Identity<'a>>> {
        b.validate()?;
        let cx = Ctx::new(b);
        match *self {
            Law::TAlgebra { unital, commutative } => t_algebra(cx, "mul", unital, commutative),
            Law::RotaBaxter => rota_baxter(cx, "mul", "R"),
            Law::Dendriform => dendriform(cx),
            Law::Tridendriform => tridendriform(cx),
            Law::PreLie => pre_lie(cx, "ast"),
            Law::Lie => lie(cx),
            Law::RbLie => rb_lie(cx),
            Law::Zinbiel => zinbiel(cx, "star"),
            Law::Poisson => poisson(cx),
            Law::PrePoisson => pre_poisson(cx),
            Law::RbPoisson => {
                let mut ids = poisson(cx)?;
                ids.extend(rota_baxter(cx, "mul", "R")?);
                ids.extend(rb_lie(cx)?);
                Ok(ids)
            }
            _ => crate::coalgebra::identities(self, cx),
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Passed at every random specialization of a parametric bundle.
    PassSpecialized,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub identity: String,
    pub grades: Vec<usize>,
    pub grade_names: Vec<String>,
    pub basis: Vec<usize>,
    pub lhs: Vector,
    pub rhs: Vector,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis: Vec<String> = self.basis.iter().map(|i| format!("u{}", i + 1)).collect();
        writeln!(f, "identity: {}", self.identity)?;
        writeln!(f, "grades: ({})", self.grade_names.join(","))?;
        writeln!(f, "basis: ({})", basis.join(","))?;
        writeln!(f, "lhs: {}", format_vector(&self.lhs))?;
        write!(f, "rhs: {}", format_vector(&self.rhs))
    }
}

pub fn format_vector(v: &[FieldElement]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub law: String,
    pub verdict: Verdict,
    pub checked: u64,
    pub counterexample: Option<Counterexample>,
    /// Assignments used for a parametric check, in order.
    pub assignments: Vec<Assignment>,
    pub failing_assignment: Option<Assignment>,
    pub seed: Option<u64>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    pub(crate) fn pass(law: &str, checked: u64) -> LawReport {
        LawReport {
            law: law.to_string(),
            verdict: Verdict::Pass,
            checked,
            counterexample: None,
            assignments: Vec::new(),
            failing_assignment: None,
            seed: None,
        }
    }

    /// Verdict line, e.g. `pass (specialized)`.
    pub fn verdict_text(&self) -> &'static str {
        match self.verdict {
            Verdict::Pass => "pass",
            Verdict::PassSpecialized => "pass (specialized)",
            Verdict::Fail => "FAIL",
        }
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "law: {}", self.law)?;
        writeln!(f, "verdict: {}", self.verdict_text())?;
        write!(f, "checked: {}", self.checked)?;
        if let Some(seed) = self.seed {
            write!(f, "\nseed: {seed}")?;
        }
        for a in &self.assignments {
            write!(f, "\nassignment: {}", format_assignment(a))?;
        }
        if let Some(a) = &self.failing_assignment {
            write!(f, "\nfailing assignment: {}", format_assignment(a))?;
        }
        if let Some(c) = &self.counterexample {
            write!(f, "\n{c}")?;
        }
        Ok(())
    }
}

pub(crate) type Eval<'a> = Box<dyn Fn(&[usize], &[usize]) -> (Vector, Vector) + 'a>;
pub(crate) type Shape<'a> = Box<dyn Fn(&[usize]) -> Vec<usize> + 'a>;

pub(crate) struct Identity<'a> {
    pub name: &'static str,
    pub arity: usize,
    pub shape: Shape<'a>,
    pub eval: Eval<'a>,
}

impl<'a> Identity<'a> {
    pub fn new(
        name: &'static str,
        arity: usize,
        shape: impl Fn(&[usize]) -> Vec<usize> + 'a,
        eval: impl Fn(&[usize], &[usize]) -> (Vector, Vector) + 'a,
    ) -> Self {
        Identity { name, arity, shape: Box::new(shape), eval: Box::new(eval) }
    }
}

pub(crate) fn run(law: &str, g: &GradeTable, ids: &[Identity]) -> LawReport {
    let mut checked = 0;
    for id in ids {
        for gs in g.tuples(id.arity) {
            for bs in tuples(&(id.shape)(&gs)) {
                checked += 1;
                let (lhs, rhs) = (id.eval)(&gs, &bs);
                if lhs != rhs {
                    let mut r = LawReport::pass(law, checked);
                    r.verdict = Verdict::Fail;
                    r.counterexample = Some(Counterexample {
                        identity: id.name.to_string(),
                        grade_names: gs.iter().map(|&x| g.name(x).to_string()).collect(),
                        grades: gs,
                        basis: bs,
                        lhs,
                        rhs,
                    });
                    return r;
                }
            }
        }
    }
    LawReport::pass(law, checked)
}

/// Checks a concrete bundle.
pub fn check(law: Law, b: &Bundle) -> Result<LawReport> {
    let ids = law.identities(b)?;
    Ok(run(law.id(), &b.grades, &ids))
}

/// Checks a bundle that may carry parameters: exactly when it has none,
/// otherwise at `k` seeded random assignments avoiding the forbidden loci.
pub fn check_param(law: Law, b: &ParamBundle, k: usize, seed: u64) -> Result<LawReport> {
    if !b.is_parametric() {
        return check(law, &b.concrete()?);
    }
    if k == 0 {
        return Err(Error::Usage("at least one specialization is required".into()));
    }
    let forbidden = b.all_forbidden();
    let mut spec = Specializer::new(seed);
    let mut assignments = Vec::new();
    let mut checked = 0;
    for _ in 0..k {
        let a = spec.next(&b.params, &b.field, &forbidden)?;
        let mut r = check(law, &b.specialize(&a)?)?;
        checked += r.checked;
        assignments.push(a.clone());
        if !r.passed() {
            r.checked = checked;
            r.assignments = assignments;
            r.failing_assignment = Some(a);
            r.seed = Some(seed);
            return Ok(r);
        }
    }
    let mut r = LawReport::pass(law.id(), checked);
    r.verdict = Verdict::PassSpecialized;
    r.assignments = assignments;
    r.seed = Some(seed);
    Ok(r)
}

/// Re-evaluates the identity named in a counterexample; true when the two
/// sides still differ.
pub fn recheck(law: Law, b: &Bundle, cx: &Counterexample) -> Result<bool> {
    let ids = law.identities(b)?;
    let id = ids
        .iter()
        .find(|i| i.name == cx.identity)
        .ok_or_else(|| Error::Usage(format!("no identity `{}` in {}", cx.identity, law)))?;
    let (l, r) = (id.eval)(&cx.grades, &cx.basis);
    Ok(l != r)
}

/// Read-only evaluation helpers over one bundle.
#[derive(Clone, Copy)]
pub(crate) struct Ctx<'a> {
    pub b: &'a Bundle,
    pub f: &'a Field,
    pub g: &'a GradeTable,
}

impl<'a> Ctx<'a> {
    pub fn new(b: &'a Bundle) -> Self {
        Ctx { b, f: &b.field, g: &b.grades }
    }

    pub fn pq(&self, p: usize, q: usize) -> usize {
        self.g.product(p, q)
    }

    pub fn dim(&self, g: usize) -> usize {
        self.b.space.dim(g)
    }

    pub fn e(&self, g: usize, i: usize) -> Vector {
        basis(self.f, self.dim(g), i)
    }

    pub fn zero(&self, g: usize) -> Vector {
        zeros(self.f, self.dim(g))
    }

    pub fn dims(&self, gs: &[usize]) -> Vec<usize> {
        gs.iter().map(|&g| self.dim(g)).collect()
    }

    /// A binary operation of the bundle as a closure `(p, a, q, b) -> a·b`.
    pub fn op(&self, name: &str) -> Result<impl Fn(usize, &[FieldElement], usize, &[FieldElement]) -> Vector + 'a> {
        let fam = self.b.family(name)?;
        let cx = *self;
        Ok(move |p: usize, a: &[FieldElement], q: usize, b: &[FieldElement]| fam.apply(p, q, a, b, cx.f))
    }

    /// An operator family as a closure `(g, v) -> R_g(v)`, plus its weight.
    pub fn operator(&self, name: &str) -> Result<(impl Fn(usize, &[FieldElement]) -> Vector + 'a, FieldElement)> {
        let op = self.b.operator(name)?;
        let f = self.f;
        Ok((move |g: usize, v: &[FieldElement]| op.apply(g, v, f), op.weight.clone()))
    }
}

fn arity2<'a>(cx: Ctx<'a>) -> impl Fn(&[usize]) -> Vec<usize> + 'a {
    move |gs| cx.dims(gs)
}

pub(crate) fn t_algebra<'a>(cx: Ctx<'a>, name: &str, unital: bool, commutative: bool) -> Result<Vec<Identity<'a>>> {
    let mul = std::rc::Rc::new(cx.op(name)?);
    let mut ids = Vec::new();
    let m = mul.clone();
    ids.push(Identity::new("associativity", 3, arity2(cx), move |g, i| {
        let (p, q, t) = (g[0], g[1], g[2]);
        let (a, b, c) = (cx.e(p, i[0]), cx.e(q, i[1]), cx.e(t, i[2]));
        let lhs = m(cx.pq(p, q), &m(p, &a, q, &b), t, &c);
        let rhs = m(p, &a, cx.pq(q, t), &m(q, &b, t, &c));
        (lhs, rhs)
    }));
    if unital {
        let e = cx.g.require_unit()?;
        let eta = cx.b.unit.clone().ok_or_else(|| Error::Missing("unit".into()))?;
        let (m1, m2) = (mul.clone(), mul.clone());
        let eta2 = eta.clone();
        ids.push(Identity::new("left-unit", 1, arity2(cx), move |g, i| {
            let a = cx.e(g[0], i[0]);
            (m1(e, &eta, g[0], &a), a)
        }));
        ids.push(Identity::new("right-unit", 1, arity2(cx), move |g, i| {
            let a = cx.e(g[0], i[0]);
            (m2(g[0], &a, e, &eta2), a)
        }));
    }
    if commutative {
        cx.g.require_commutative()?;
        let m = mul.clone();
        ids.push(Identity::new("commutativity", 2, arity2(cx), move |g, i| {
            let (a, b) = (cx.e(g[0], i[0]), cx.e(g[1], i[1]));
            (m(g[0], &a, g[1], &b), m(g[1], &b, g[0], &a))
        }));
    }
    Ok(ids)
}

pub(crate) fn rota_baxter<'a>(cx: Ctx<'a>, mul: &str, op: &str) -> Result<Vec<Identity<'a>>> {
    let m = cx.op(mul)?;
    let (r, w) = cx.operator(op)?;
    Ok(vec![Identity::new("rota-baxter", 2, arity2(cx), move |g, i| {
        let (p, q) = (g[0], g[1]);
        let (a, b) = (cx.e(p, i[0]), cx.e(q, i[1]));
        let (ra, rb) = (r(p, &a), r(q, &b));
        let lhs = m(p, &ra, q, &rb);
        let inner = add(&add(&m(p, &ra, q, &b), &m(p, &a, q, &rb)), &scale(&w, &m(p, &a, q, &b)));
        (lhs, r(cx.pq(p, q), &inner))
    })])
}

fn dendriform(cx: Ctx<'_>) -> Result<Vec<Identity<'_>>> {
    let prec = std::rc::Rc::new(cx.op("prec")?);
    let succ = std::rc::Rc::new(cx.op("succ")?);
    let (l1, s1) = (prec.clone(), succ.clone());
    let (l2, s2) = (prec.clone(), succ.clone());
    let (l3, s3) = (prec, succ);
    Ok(vec![
        Identity::new("dendriform-1", 3, arity2(cx), move |g, i| {
            let (p, q, t) = (g[0], g[1], g[2]);
            let (a, b, c) = (cx.e(p, i[0]), cx.e(q, i[1]), cx.e(t, i[2]));
            let lhs = l1(cx.pq(p, q), &l1(p, &a, q, &b), t, &c);
            let bc = add(&l1(q, &b, t, &c), &s1(q, &b, t, &c));
            (lhs, l1(p, &a, cx.pq(q, t), &bc))
        }),
        Identity::new("dendriform-2", 3, arity2(cx), move |g, i| {
            let (p, q, t) = (g[0], g[1], g[2]);
            let (a, b, c) = (cx.e(p, i[0]), cx.e(q, i[1]), cx.e(t, i[2]));
            let lhs = l2(cx.pq(p, q), &s2(p, &a, q, &b), t, &c);
            (lhs, s2(p, &a, cx.pq(q, t), &l2(q, &b, t, &c)))
        }),
        Identity::new("dendriform-3", 3, arity2(cx), move |g, i| {
            let (p, q, t) = (g[0], g[1], g[2]);
            let (a, b, c) = (cx.e(p, i[0]), cx.e(q, i[1]), cx.e(t, i[2]));
            let ab = add(&l3(p, &a, q, &b), &s3(p, &a, q, &b));
            let lhs = s3(cx.pq(p, q), &ab, t, &c);
            (lhs, s3(p, &a, cx.pq(q, t), &s3(q, &b, t, &c)))
        }),
    ])
}

fn tridendriform(cx: Ctx<'_>) -> Result<Vec<Identity<'_>>> {
    type Op<'b> = std::rc::Rc<dyn Fn(usize, &[FieldElement], usize, &[FieldElement]) -> Vector + 'b>;
    let l: Op = std::rc::Rc::new(cx.op("prec")?);
    let s: Op = std::rc::Rc::new(cx.op("succ")?);
    let d: Op = std::rc::Rc::new(cx.op("dot")?);
    // (outer-left ∘ inner-left) vs sum of (outer-right ∘ inner-right) terms
    let spec: [(&'static str, Vec<Op>, Op, Op, Vec<Op>); 7] = [
        ("tridendriform-1", vec![l.clone()], l.clone(), l.clone(), vec![l.clone(), s.clone(), d.clone()]),
        ("tridendriform-2", vec![s.clone()], l.clone(), s.clone(), vec![l.clone()]),
        ("tridendriform-3", vec![l.clone(), s.clone(), d.clone()], s.clone(), s.clone(), vec![s.clone()]),
        ("tridendriform-4", vec![s.clone()], d.clone(), s.clone(), vec![d.clone()]),
        ("tridendriform-5", vec![l.clone()], d.clone(), d.clone(), vec![s.clone()]),
        ("tridendriform-6", vec![d.clone()], l.clone(), d.clone(), vec![l.clone()]),
        ("tridendriform-7", vec![d.clone()], d.clone(), d.clone(), vec![d.clone()]),
    ];
    Ok(spec
        .into_iter()
        .map(|(name, inner_l, outer_l, outer_r, inner_r)| {
            Identity::new(name, 3, arity2(cx), move |g, i| {
                let (p, q, t) = (g[0], g[1], g[2]);
                let (a, b, c) = (cx.e(p, i[0]), cx.e(q, i[1]), cx.e(t, i[2]));
                let mut ab = cx.zero(cx.pq(p, q));
                for op in &inner_l {
                    ab = add(&ab, &op(p, &a, q, &b));
                }
                let mut bc = cx.zero(cx.pq(q, t));
                for op in &inner_r {
                    bc = add(&bc, &op(q, &b, t, &c));
                }
                (outer_l(cx.pq(p, q), &ab, t, &c), outer_r(p, &a, cx.pq(q, t), &bc))
            })
        })
        .collect())
}

fn pre_lie<'a>(cx: Ctx<'a>, name: &str) -> Result<Vec<Identity<'a>>> {
    cx.g.require_commutative()?;
    let m = cx.op(name)?;
    Ok(vec![Identity::new("pre-lie", 3, arity2(cx), move |g, i| {
        let (p, q, t) = (g[0], g[1], g[2]);
        let (a, b, c) = (cx.e(p, i[0]), cx.e(q, i[1]), cx.e(t, i[2]));
        let lhs = sub(&m(p, &a, cx.pq(q, t), &m(q, &b, t, &c)), &m(cx.pq(p, q), &m(p, &a, q, &b), t, &c));
        let rhs = sub(&m(q, &b, cx.pq(p, t), &m(p, &a, t, &c)), &m(cx.pq(q, p), &m(q, &b, p, &a), t, &c));
        (lhs, rhs)
    })])
}

fn lie(cx: Ctx<'_>) -> Result<Vec<Identity<'_>>> {
    cx.g.require_commutative()?;
    let br = std::rc::Rc::new(cx.op("bracket")?);
    let b1 = br.clone();
    Ok(vec![
        Identity::new("antisymmetry", 2, arity2(cx), move |g, i| {
            let (a, b) = (cx.e(g[0], i[0]), cx.e(g[1], i[1]));
            let ab = b1(g[0], &a, g[1], &b);
            let ba = b1(g[1], &b, g[0], &a);
            (add(&ab, &ba), cx.zero(cx.pq(g[0], g[1])))
        }),
        Identity::new("jacobi", 3, arity2(cx), move |g, i| {
            let (p, q, t) = (g[0], g[1], g[2]);
            let (a, b, c) = (cx.e(p, i[0]), cx.e(q, i[1]), cx.e(t, i[2]));
            let x = br(cx.pq(p, q), &br(p, &a, q, &b), t, &c);
            let y = br(cx.pq(q, t), &br(q, &b, t, &c), p, &a);
            let z = br(cx.pq(t, p), &br(t, &c, p, &a), q, &b);
            (add(&add(&x, &y), &z), cx.zero(cx.pq(cx.pq(p, q), t)))
        }),
    ])
}

fn rb_lie(cx: Ctx<'_>) -> Result<Vec<Identity<'_>>> {
    cx.g.require_commutative()?;
    rota_baxter(cx, "bracket", "R").map(|mut v| {
        v[0].name = "rb-lie";
        v
    })
}

fn zinbiel<'a>(cx: Ctx<'a>, name: &str) -> Result<Vec<Identity<'a>>> {
    cx.g.require_commutative()?;
    let m = cx.op(name)?;
    Ok(vec![Identity::new("zinbiel", 3, arity2(cx), move |g, i| {
        let (p, q, t) = (g[0], g[1], g[2]);
        let (a, b, c) = (cx.e(p, i[0]), cx.e(q, i[1]), cx.e(t, i[2]));
        let lhs = m(p, &a, cx.pq(q, t), &m(q, &b, t, &c));
        let rhs = add(&m(cx.pq(p, q), &m(p, &a, q, &b), t, &c), &m(cx.pq(q, p), &m(q, &b, p, &a), t, &c));
        (lhs, rhs)
    })])
}

fn poisson(cx: Ctx<'_>) -> Result<Vec<Identity<'_>>> {
    let mut ids = t_algebra(cx, "mul", false, true)?;
    ids.extend(lie(cx)?);
    let m = cx.op("mul")?;
    let br = cx.op("bracket")?;
    ids.push(Identity::new("leibniz", 3, arity2(cx), move |g, i| {
        let (p, q, t) = (g[0], g[1], g[2]);
        let (a, b, c) = (cx.e(p, i[0]), cx.e(q, i[1]), cx.e(t, i[2]));
        let lhs = br(p, &a, cx.pq(q, t), &m(q, &b, t, &c));
        let rhs = add(&m(cx.pq(p, q), &br(p, &a, q, &b), t, &c), &m(q, &b, cx.pq(p, t), &br(p, &a, t, &c)));
        (lhs, rhs)
    }));
    Ok(ids)
}

fn pre_poisson(cx: Ctx<'_>) -> Result<Vec<Identity<'_>>> {
    let mut ids = zinbiel(cx, "star")?;
    ids.extend(pre_lie(cx, "ast")?);
    let star = std::rc::Rc::new(cx.op("star")?);
    let ast = std::rc::Rc::new(cx.op("ast")?);
    let (st1, as1) = (star.clone(), ast.clone());
    ids.push(Identity::new("pre-poisson-1", 3, arity2(cx), move |g, i| {
        let (p, q, t) = (g[0], g[1], g[2]);
        let (a, b, c) = (cx.e(p, i[0]), cx.e(q, i[1]), cx.e(t, i[2]));
        let lhs = sub(&st1(cx.pq(p, q), &as1(p, &a, q, &b), t, &c), &st1(cx.pq(q, p), &as1(q, &b, p, &a), t, &c));
        let rhs = sub(&as1(p, &a, cx.pq(q, t), &st1(q, &b, t, &c)), &st1(q, &b, cx.pq(p, t), &as1(p, &a, t, &c)));
        (lhs, rhs)
    }));
    ids.push(Identity::new("pre-poisson-2", 3, arity2(cx), move |g, i| {
        let (p, q, t) = (g[0], g[1], g[2]);
        let (a, b, c) = (cx.e(p, i[0]), cx.e(q, i[1]), cx.e(t, i[2]));
        let lhs = add(&ast(cx.pq(p, q), &star(p, &a, q, &b), t, &c), &ast(cx.pq(q, p), &star(q, &b, p, &a), t, &c));
        let rhs = add(&star(p, &a, cx.pq(q, t), &ast(q, &b, t, &c)), &star(q, &b, cx.pq(p, t), &ast(p, &a, t, &c)));
        (lhs, rhs)
    }));
    Ok(ids)
}
