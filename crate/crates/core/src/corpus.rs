//! Reference structures: small algebras, operator and pair listings, and
//! printed multiplication tables, transcribed literally. Entries the checkers
//! contradict keep their printed form and carry an annotation.

use crate::error::{Error, Result};
use crate::grading::{GradeTable, GradedSpace};
use crate::scalar::{Field, FieldElement, ParamExpr, WEIGHT};
use crate::search::OperatorFamilyExpr;
use crate::structures::{Algebra, BilinearFamily, OperatorFamily, ParamBundle};

fn algebra(name: &str, dim: usize, rows: &[&[&[i64]]]) -> Algebra<i64> {
    let table = rows.iter().flat_map(|r| r.iter().flat_map(|v| v.iter().copied())).collect();
    let mut unit = vec![0; dim];
    unit[0] = 1;
    Algebra { name: name.into(), dim, table, unit: Some(unit) }
}

/// Unit `u1`, `u2² = u2`.
pub fn two_dim() -> Algebra<i64> {
    algebra("two-dim", 2, &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[0, 1]]])
}

/// Unit `u1`, `u2² = u2`, `u2u3 = u3u2 = u3`, `u3² = 0`.
pub fn three_dim() -> Algebra<i64> {
    algebra(
        "three-dim",
        3,
        &[
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]],
            &[&[0, 1, 0], &[0, 1, 0], &[0, 0, 1]],
            &[&[0, 0, 1], &[0, 0, 1], &[0, 0, 0]],
        ],
    )
}

/// The four-dimensional Taft-Sweedler algebra on `u1 = 1, u2 = g, u3 = x, u4 = gx`.
pub fn taft_sweedler() -> Algebra<i64> {
    algebra(
        "taft-sweedler",
        4,
        &[
            &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]],
            &[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]],
            &[&[0, 0, 1, 0], &[0, 0, 0, -1], &[0, 0, 0, 0], &[0, 0, 0, 0]],
            &[&[0, 0, 0, 1], &[0, 0, -1, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]],
        ],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraId {
    TwoDim,
    ThreeDim,
    Taft,
}

impl AlgebraId {
    pub const ALL: [AlgebraId; 3] = [AlgebraId::TwoDim, AlgebraId::ThreeDim, AlgebraId::Taft];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            AlgebraId::TwoDim => "two-dim",
            AlgebraId::ThreeDim => "three-dim",
            AlgebraId::Taft => "taft",
        }
    }

    pub fn parse(s: &str) -> Result<AlgebraId> {
        AlgebraId::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown algebra `{s}` (two-dim, three-dim, taft)")))
    }

    pub fn algebra(self) -> Algebra<i64> {
        match self {
            AlgebraId::TwoDim => two_dim(),
            AlgebraId::ThreeDim => three_dim(),
            AlgebraId::Taft => taft_sweedler(),
        }
    }

    pub fn over(self, field: &Field) -> Algebra<FieldElement> {
        self.algebra().try_map(|&x| Ok(field.from_int(x))).expect("integer constants")
    }

    pub fn dim(self) -> usize {
        self.algebra().dim
    }

    /// Prefix of the operator listing for this algebra.
    pub fn listing(self) -> &'static str {
        match self {
            AlgebraId::TwoDim => "15.15",
            AlgebraId::ThreeDim => "15.16",
            AlgebraId::Taft => "15.17",
        }
    }
}

/// What the checkers are expected to report for an entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    Holds,
    /// Known discrepancy with the printed claim.
    Fails(&'static str),
}

impl Expected {
    pub fn holds(&self) -> bool {
        matches!(self, Expected::Holds)
    }
}

#[derive(Clone, Debug)]
pub struct OperatorEntry {
    pub id: String,
    pub algebra: AlgebraId,
    pub family: OperatorFamilyExpr,
    pub expected: Expected,
}

impl OperatorEntry {
    pub fn is_parametric(&self) -> bool {
        !self.family.params.is_empty()
    }

    /// `A[{1,q}]` with this operator on both grades, weight left symbolic.
    pub fn bundle(&self) -> ParamBundle {
        lifted_param_bundle(self.algebra, &[&self.family, &self.family], &self.id)
    }
}

/// `A[{1,q}]` with one operator per grade as a parametric bundle.
pub fn lifted_param_bundle(alg: AlgebraId, ops: &[&OperatorFamilyExpr; 2], note: &str) -> ParamBundle {
    let a = alg.algebra();
    let g = GradeTable::unit_idempotent();
    let sp = GradedSpace::uniform(&g, a.dim);
    let mul = BilinearFamily::from_fn(&g, &sp, |_, _, i, j, k| ParamExpr::int(a.product(i, j)[k]));
    let op = OperatorFamily::from_fn(&sp, ParamExpr::weight(), |phi, i, j| ops[phi].entries[i * a.dim + j].clone());
    let mut b = ParamBundle::new("rota-baxter-t-algebra", Field::Rational, g, sp)
        .with_family("mul", mul)
        .with_operator("R", op);
    b.unit = a.unit.as_ref().map(|u| u.iter().map(|&x| ParamExpr::int(x)).collect());
    b.note = note.to_string();
    let mut params = vec![WEIGHT.to_string()];
    for o in ops {
        for p in &o.params {
            if !params.contains(p) {
                params.push(p.clone());
            }
        }
        for f in &o.forbidden {
            if !b.forbidden.contains(f) {
                b.forbidden.push(f.clone());
            }
        }
    }
    b.params = params;
    b
}

#[derive(Clone, Debug)]
pub struct PairEntry {
    pub id: String,
    pub algebra: AlgebraId,
    pub first: String,
    pub second: String,
    pub expected: Expected,
}

/// A semi-Hopf listing: one operator per grade of `A[{1,q}]`, grouplike coproduct.
#[derive(Clone, Debug)]
pub struct SemiHopfEntry {
    pub id: String,
    pub algebra: AlgebraId,
    pub unit_grade: OperatorFamilyExpr,
    pub q_grade: OperatorFamilyExpr,
    pub expected: Expected,
}

/// Which derived structure a printed table shows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    /// `≺, ≻, •` from a Rota-Baxter operator.
    Tridendriform,
    /// Sum of the dendriform operations obtained from the tridendriform ones.
    SumProduct,
    /// Pre-Lie product of that dendriform structure.
    PreLie,
    /// Commutator of the sum product.
    Lie,
}

impl TableKind {
    pub fn families(self) -> &'static [&'static str] {
        match self {
            TableKind::Tridendriform => &["prec", "succ", "dot"],
            TableKind::SumProduct => &["mul"],
            TableKind::PreLie => &["ast"],
            TableKind::Lie => &["bracket"],
        }
    }
}

#[derive(Clone, Debug)]
pub struct TableEntry {
    pub id: String,
    pub algebra: AlgebraId,
    pub kind: TableKind,
    /// Operator ids on the unit grade and on `q`.
    pub source: (String, String),
    /// Unlisted `[b,a]` entries are the negatives of listed `[a,b]` ones.
    pub antisymmetric: bool,
    pub text: &'static str,
    pub expected: Expected,
    pub note: &'static str,
}

/// One printed value `op(u_i g, u_j h) = Σ c·u_k (gh)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedEntry {
    pub line: usize,
    pub family: String,
    pub left: (usize, usize),
    pub right: (usize, usize),
    pub value: Vec<ParamExpr>,
}

impl TableEntry {
    /// Parses the transcription: `value <terms>` opens a chain of equal
    /// entries, each member line being `[-]op u<i>.<grade> u<j>.<grade>`;
    /// a leading `-` means the entry equals minus the chain value.
    pub fn printed(&self) -> Result<Vec<PrintedEntry>> {
        let g = GradeTable::unit_idempotent();
        let n = self.algebra.dim();
        let mut out = Vec::new();
        let mut value: Option<Vec<ParamExpr>> = None;
        for (ln, raw) in self.text.lines().enumerate() {
            let line = ln + 1;
            let err = |msg: String| Error::Parse { line, msg };
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            if let Some(rest) = t.strip_prefix("value") {
                let mut v = vec![ParamExpr::zero(); n];
                for term in rest.split_whitespace() {
                    let (c, b) = term.rsplit_once(':').ok_or_else(|| err(format!("bad term `{term}`")))?;
                    let (k, _) = parse_basis(b, n, &g).map_err(err)?;
                    v[k] = ParamExpr::parse(&c.replace('l', WEIGHT)).map_err(|e| err(e.to_string()))?;
                }
                value = Some(v);
                continue;
            }
            let v = value.clone().ok_or_else(|| err("entry before any value line".into()))?;
            let (neg, t) = match t.strip_prefix('-') {
                Some(r) => (true, r),
                None => (false, t),
            };
            let parts: Vec<&str> = t.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(err(format!("expected `op left right`, got `{raw}`")));
            }
            let family = match parts[0] {
                "prec" | "succ" | "dot" | "ast" | "bracket" => parts[0].to_string(),
                "diamond" => "mul".to_string(),
                o => return Err(err(format!("unknown operation `{o}`"))),
            };
            let left = parse_basis(parts[1], n, &g).map_err(err)?;
            let right = parse_basis(parts[2], n, &g).map_err(err)?;
            let value = if neg { v.into_iter().map(|x| -x).collect() } else { v };
            out.push(PrintedEntry { line, family, left, right, value });
        }
        Ok(out)
    }

    pub fn params(&self) -> Vec<String> {
        let mut ps = std::collections::BTreeSet::new();
        if let Ok(es) = self.printed() {
            for e in es {
                for v in &e.value {
                    ps.extend(v.params());
                }
            }
        }
        ps.remove(WEIGHT);
        std::iter::once(WEIGHT.to_string()).chain(ps).collect()
    }
}

/// `u<i>.<grade>` → `(basis index, grade index)`.
fn parse_basis(s: &str, n: usize, g: &GradeTable) -> std::result::Result<(usize, usize), String> {
    let (b, gr) = s.split_once('.').ok_or_else(|| format!("bad basis element `{s}`"))?;
    let i: usize = b
        .strip_prefix('u')
        .and_then(|x| x.parse().ok())
        .filter(|&i| (1..=n).contains(&i))
        .ok_or_else(|| format!("bad basis index in `{s}`"))?;
    let grade = g.index(gr).ok_or_else(|| format!("unknown grade in `{s}`"))?;
    Ok((i - 1, grade))
}

fn family(n: usize, rows: &[&[&str]], params: &[&str]) -> OperatorFamilyExpr {
    let entries = rows
        .iter()
        .flat_map(|r| r.iter().map(|s| ParamExpr::parse(&s.replace('l', "lambda")).expect("corpus expression")))
        .collect::<Vec<_>>();
    assert_eq!(entries.len(), n * n);
    // Loci the listing's denominators and hypotheses exclude.
    let forbidden = ["p2", "p3", "lambda+p2"]
        .iter()
        .map(|s| ParamExpr::parse(s).unwrap())
        .filter(|e| e.params().iter().all(|p| p == WEIGHT || params.contains(&p.as_str())))
        .filter(|_| !params.is_empty())
        .collect();
    OperatorFamilyExpr { n, entries, params: params.iter().map(|s| s.to_string()).collect(), forbidden }
}

// Operator images, row i = image of u_{i+1}; `l` abbreviates the weight.
const TWO_DIM_OPS: &[(&str, &[&[&str]])] = &[
    ("a", &[&["-l", "0"], &["0", "0"]]),
    ("b", &[&["0", "0"], &["0", "-l"]]),
    ("c", &[&["-l", "0"], &["0", "-l"]]),
    ("d", &[&["0", "-l"], &["0", "-l"]]),
    ("e", &[&["-l", "0"], &["-l", "0"]]),
    ("f", &[&["0", "l"], &["0", "0"]]),
    ("g", &[&["0", "0"], &["l", "-l"]]),
    ("h", &[&["-2*l", "l"], &["-l", "0"]]),
    ("i", &[&["-l", "-l"], &["0", "-l"]]),
    ("j", &[&["-l", "l"], &["0", "0"]]),
    ("k", &[&["l", "-l"], &["l", "-l"]]),
];

const THREE_DIM_OPS: &[(&str, &[&[&str]])] = &[
    ("a", &[&["-l", "0", "0"], &["0", "0", "0"], &["0", "0", "0"]]),
    ("b", &[&["0", "0", "0"], &["0", "-l", "0"], &["0", "0", "0"]]),
    ("c", &[&["0", "0", "0"], &["0", "0", "0"], &["0", "0", "-l"]]),
    ("d", &[&["-l", "0", "0"], &["0", "-l", "0"], &["0", "0", "0"]]),
    ("e", &[&["0", "0", "0"], &["0", "-l", "0"], &["0", "0", "-l"]]),
    ("f", &[&["-l", "0", "0"], &["0", "0", "0"], &["0", "0", "-l"]]),
    ("g", &[&["-l", "0", "0"], &["0", "-l", "0"], &["0", "0", "-l"]]),
    ("h", &[&["0", "-l", "0"], &["0", "-l", "0"], &["0", "0", "0"]]),
    ("i", &[&["0", "-l", "0"], &["0", "-l", "0"], &["0", "0", "-l"]]),
    ("j", &[&["0", "l", "0"], &["0", "0", "0"], &["0", "0", "0"]]),
    ("k", &[&["0", "l", "0"], &["0", "0", "0"], &["0", "0", "-l"]]),
    ("l", &[&["0", "0", "0"], &["l", "-l", "0"], &["0", "0", "0"]]),
    ("m", &[&["0", "0", "0"], &["l", "-l", "0"], &["0", "0", "-l"]]),
    ("n", &[&["-2*l", "l", "0"], &["-l", "0", "0"], &["0", "0", "0"]]),
    ("o", &[&["-2*l", "l", "0"], &["-l", "0", "0"], &["0", "0", "-l"]]),
    ("p", &[&["-l", "-l", "0"], &["0", "-l", "0"], &["0", "0", "0"]]),
    ("q", &[&["-l", "-l", "0"], &["0", "-l", "0"], &["0", "0", "-l"]]),
    ("r", &[&["-l", "l", "0"], &["0", "0", "0"], &["0", "0", "0"]]),
    ("s", &[&["-l", "l", "0"], &["0", "0", "0"], &["0", "0", "-l"]]),
    ("t", &[&["-l", "0", "0"], &["-l", "0", "0"], &["0", "0", "0"]]),
    ("u", &[&["-l", "0", "0"], &["-l", "0", "0"], &["0", "0", "-l"]]),
    ("v", &[&["l", "-l", "0"], &["l", "-l", "0"], &["0", "0", "0"]]),
    ("w", &[&["l", "-l", "0"], &["l", "-l", "0"], &["0", "0", "-l"]]),
];

type TaftOp = (&'static str, &'static [&'static [&'static str]], &'static [&'static str]);

const TAFT_OPS: &[TaftOp] = &[
    ("a", &[&["0", "0", "0", "0"], &["0", "0", "0", "0"], &["0", "0", "-l", "0"], &["0", "0", "0", "-l"]], &[]),
    ("b", &[&["-l", "0", "0", "0"], &["0", "-l", "0", "0"], &["0", "0", "0", "0"], &["0", "0", "0", "0"]], &[]),
    ("c", &[&["-l", "0", "0", "0"], &["0", "-l", "0", "0"], &["0", "0", "-l", "0"], &["0", "0", "0", "-l"]], &[]),
    (
        "d",
        &[
            &["0", "0", "0", "0"],
            &["-p1", "p1", "-(l+p1)*(l+p1+p2)/p3", "(l+p1)*(l+p2)/p3"],
            &["-p3", "p3", "-(2*l+p1+p2)", "l+p2"],
            &["-p3", "p3", "-(l+p1+p2)", "p2"],
        ],
        &["p1", "p2", "p3"],
    ),
    (
        "e",
        &[
            &["-l", "0", "0", "0"],
            &["l+p1", "p1", "-(l+p1)*(l+p1+p2)/p3", "(l+p1)*(l+p2)/p3"],
            &["p3", "p3", "-(2*l+p1+p2)", "l+p2"],
            &["p3", "p3", "-(l+p1+p2)", "p2"],
        ],
        &["p1", "p2", "p3"],
    ),
    (
        "f",
        &[
            &["-l", "0", "0", "0"],
            &["l", "0", "p1", "p1*p2/(l+p2)"],
            &["0", "0", "-(l+p2)", "-p2"],
            &["0", "0", "l+p2", "p2"],
        ],
        &["p1", "p2"],
    ),
    (
        "g",
        &[
            &["-l", "0", "0", "0"],
            &["l", "0", "l*(l+p1)/p2", "l*(l+p1)/p2"],
            &["-p2", "-p2", "-(2*l+p1)", "-(l+p1)"],
            &["p2", "p2", "l+p1", "p1"],
        ],
        &["p1", "p2"],
    ),
    (
        "h",
        &[
            &["l/2", "-l/2", "p1", "p2"],
            &["l/2", "-l/2", "-p2", "p1"],
            &["0", "0", "-l/2", "-l/2"],
            &["0", "0", "-l/2", "-l/2"],
        ],
        &["p1", "p2"],
    ),
];

const NOT_RB_TAFT_H: &str =
    "the Rota-Baxter identity fails unless p1 = 0 or the weight is 0";

/// All listed operators, ids `15.15(a)` to `15.17(h)`.
pub fn operators() -> Vec<OperatorEntry> {
    let mut out = Vec::new();
    for (name, rows) in TWO_DIM_OPS {
        out.push(OperatorEntry {
            id: format!("15.15({name})"),
            algebra: AlgebraId::TwoDim,
            family: family(2, rows, &[]),
            expected: Expected::Holds,
        });
    }
    for (name, rows) in THREE_DIM_OPS {
        out.push(OperatorEntry {
            id: format!("15.16({name})"),
            algebra: AlgebraId::ThreeDim,
            family: family(3, rows, &[]),
            expected: Expected::Holds,
        });
    }
    for (name, rows, params) in TAFT_OPS {
        out.push(OperatorEntry {
            id: format!("15.17({name})"),
            algebra: AlgebraId::Taft,
            family: family(4, rows, params),
            expected: if *name == "h" { Expected::Fails(NOT_RB_TAFT_H) } else { Expected::Holds },
        });
    }
    out
}

pub fn operator(id: &str) -> Result<OperatorEntry> {
    operators()
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Usage(format!("no corpus operator `{id}`")))
}

const PAIRS_TWO_DIM: &str = "ac ad ae aj bc bd bj cd cg cj di dj dk ej fh fj gj hj ij ik \
    cb dc ea eb ec ed fc fd gb gc gd hc hd hf ic id jc jd jf jh kc kd ki";

const PAIRS_THREE_DIM: &str = "ad ag ah ai ar at au bd bg bh bi bl br cf cg ci cr cs cu dg dh di \
    dl dr eg ei el em er es eu fg fi fr fs fu gi gl gm gr gs gv gw hi \
    hr hv iq ir is iv iw jn jo jr ko kr ks lr mr ms no nr or os pr pv \
    qr qs qv qw tu db ec fc gc ge hd hg ic ig jg jh ji kc kg ki lb ld \
    le lg lh li mc me mg mi ml nd ng nh ni nj oc og oi ok pd pg ph pi \
    qc qg qi rd rg rh ri rj rn ro sc sg si sk so sr ta td tg th ti tr \
    uc uf ug ui ur us vd vg vh vi vp vr wc wg wi wq wr ws wv";

const PAIRS_TAFT: &str = "ac bc ca dc ec fc gc hc";

fn pair_note(id: &str) -> Option<&'static str> {
    Some(match id {
        "15.5(e,b)" | "15.6(e,u)" | "15.6(g,v)" | "15.6(g,w)" | "15.6(l,e)" => {
            "a pair identity fails; see the reported counterexample"
        }
        "15.7(h,c)" => "15.17(h) is itself not a Rota-Baxter operator for p1 ≠ 0",
        _ => return None,
    })
}

/// All listed Rota-Baxter pairs, ids like `15.5(a,c)`.
pub fn pairs() -> Vec<PairEntry> {
    let mut out = Vec::new();
    for (ex, alg, list) in [
        ("15.5", AlgebraId::TwoDim, PAIRS_TWO_DIM),
        ("15.6", AlgebraId::ThreeDim, PAIRS_THREE_DIM),
        ("15.7", AlgebraId::Taft, PAIRS_TAFT),
    ] {
        for p in list.split_whitespace() {
            let (a, b) = (&p[0..1], &p[1..2]);
            let id = format!("{ex}({a},{b})");
            out.push(PairEntry {
                expected: pair_note(&id).map_or(Expected::Holds, Expected::Fails),
                id,
                algebra: alg,
                first: format!("{}({a})", alg.listing()),
                second: format!("{}({b})", alg.listing()),
            });
        }
    }
    out
}

/// The lifts printed as `A[{1,q}]` examples: unit-grade and `q`-grade operators.
pub fn lifts() -> Vec<PairEntry> {
    [("15.8(1)", AlgebraId::TwoDim, "a", "c"), ("15.8(2)", AlgebraId::ThreeDim, "a", "d"), ("15.8(3)", AlgebraId::Taft, "a", "c")]
        .into_iter()
        .map(|(id, alg, a, b)| PairEntry {
            id: id.into(),
            algebra: alg,
            first: format!("{}({a})", alg.listing()),
            second: format!("{}({b})", alg.listing()),
            expected: Expected::Holds,
        })
        .collect()
}

// Diagonals of the operators on the unit grade and on q; x = −λ.
const SEMI_HOPF: &[(&str, AlgebraId, &str, &str)] = &[
    ("1.1", AlgebraId::TwoDim, "x0", "xx"),
    ("1.2", AlgebraId::TwoDim, "0x", "xx"),
    ("1.3", AlgebraId::TwoDim, "xx", "0x"),
    ("2.1", AlgebraId::ThreeDim, "x00", "xx0"),
    ("2.2", AlgebraId::ThreeDim, "x00", "xxx"),
    ("2.3", AlgebraId::ThreeDim, "0x0", "xx0"),
    ("2.4", AlgebraId::ThreeDim, "0x0", "xxx"),
    ("2.5", AlgebraId::ThreeDim, "00x", "x0x"),
    ("2.6", AlgebraId::ThreeDim, "00x", "xxx"),
    ("2.7", AlgebraId::ThreeDim, "xx0", "xxx"),
    ("2.8", AlgebraId::ThreeDim, "0xx", "xxx"),
    ("2.9", AlgebraId::ThreeDim, "x0x", "xxx"),
    ("2.10", AlgebraId::ThreeDim, "xx0", "0x0"),
    ("2.11", AlgebraId::ThreeDim, "0xx", "00x"),
    ("2.12", AlgebraId::ThreeDim, "x0x", "00x"),
    ("2.13", AlgebraId::ThreeDim, "xxx", "00x"),
    ("2.14", AlgebraId::ThreeDim, "xxx", "0xx"),
    ("3.1", AlgebraId::Taft, "00xx", "xxxx"),
    ("3.2", AlgebraId::Taft, "xx00", "xxxx"),
    ("3.3", AlgebraId::Taft, "xxxx", "00xx"),
];

fn diagonal(d: &str) -> OperatorFamilyExpr {
    let n = d.len();
    let mut entries = vec![ParamExpr::zero(); n * n];
    for (i, c) in d.chars().enumerate() {
        if c == 'x' {
            entries[i * n + i] = -ParamExpr::weight();
        }
    }
    OperatorFamilyExpr { n, entries, params: vec![], forbidden: vec![] }
}

/// Operator listings claimed compatible with the grouplike coproduct.
pub fn semi_hopf() -> Vec<SemiHopfEntry> {
    SEMI_HOPF
        .iter()
        .map(|&(part, alg, one, q)| SemiHopfEntry {
            id: format!("15.11({part})"),
            algebra: alg,
            unit_grade: diagonal(one),
            q_grade: diagonal(q),
            expected: match alg {
                AlgebraId::TwoDim => Expected::Holds,
                AlgebraId::ThreeDim => Expected::Fails("grouplike counit is not multiplicative: ε(u3·u3) = 0 but ε(u3)ε(u3) = 1"),
                AlgebraId::Taft => Expected::Fails("grouplike coproduct is not multiplicative: u3·u2 = −u4"),
            },
        })
        .collect()
}

const TABLE_TWO_DIM_TRIDEND: &str = "
value -l:u2.q
prec u1.1 u1.q
prec u1.1 u2.q
succ u1.1 u2.q
-dot u1.1 u2.q
prec u2.1 u1.q
succ u2.1 u1.q
succ u2.1 u2.q
-dot u2.1 u2.q
succ u1.q u1.1
-dot u2.1 u1.q
prec u2.1 u2.q
prec u1.q u2.1
succ u1.q u2.1
-dot u1.q u2.1
prec u2.q u1.1
succ u2.q u1.1
-dot u2.q u1.1
prec u2.q u2.1
succ u2.q u2.1
-dot u2.q u2.1
prec u1.q u1.q
succ u1.q u1.q
prec u1.q u2.q
succ u1.q u2.q
-dot u1.q u2.q
prec u2.q u1.q
succ u2.q u1.q
-dot u2.q u1.q
prec u2.q u2.q
succ u2.q u2.q
-dot u2.q u2.q
value -l:u2.1
prec u1.1 u2.1
succ u1.1 u2.1
-dot u1.1 u2.1
prec u2.1 u1.1
succ u2.1 u1.1
-dot u2.1 u1.1
prec u2.1 u2.1
succ u2.1 u2.1
-dot u2.1 u2.1
value -l:u1.q
succ u1.1 u1.q
-dot u1.1 u1.q
prec u1.q u1.1
-dot u1.q u1.q
-dot u1.q u1.1
value -l:u1.1
prec u1.1 u1.1
succ u1.1 u1.1
-dot u1.1 u1.1
";

const TABLE_TAFT_TRIDEND: &str = "
value -l:u1.q
prec u1.1 u1.q
succ u1.1 u1.q
-dot u1.1 u1.q
prec u2.1 u2.q
-dot u2.1 u2.q
prec u1.q u1.1
succ u1.q u1.1
-dot u1.q u1.1
succ u2.q u2.1
-dot u2.q u2.1
prec u1.q u1.q
succ u1.q u1.q
-dot u1.q u1.q
prec u2.q u2.q
succ u2.q u2.q
-dot u2.q u2.q
value -l:u2.q
prec u1.1 u2.q
succ u1.1 u2.q
-dot u1.1 u2.q
prec u2.1 u1.q
-dot u2.1 u1.q
succ u1.q u2.1
-dot u1.q u2.1
prec u2.q u1.1
succ u2.q u1.1
-dot u2.q u1.1
prec u1.q u2.q
succ u1.q u2.q
-dot u1.q u2.q
prec u2.q u1.q
succ u2.q u1.q
-dot u2.q u1.q
value -l:u3.q
prec u1.1 u3.q
succ u1.1 u3.q
-dot u1.1 u3.q
prec u2.1 u4.q
-succ u2.1 u4.q
-dot u2.1 u4.q
prec u3.1 u1.q
-dot u3.1 u1.q
-prec u4.1 u2.q
dot u4.1 u2.q
succ u1.q u3.1
-dot u1.q u3.1
succ u2.q u4.1
-dot u2.q u4.1
prec u3.q u1.1
succ u3.q u1.1
dot u3.q u1.1
prec u4.q u2.1
-succ u4.q u2.1
dot u4.q u2.1
prec u1.q u3.q
succ u1.q u3.q
-dot u1.q u3.q
prec u2.q u4.q
succ u2.q u4.q
-dot u2.q u4.q
prec u3.q u1.q
succ u3.q u1.q
-dot u3.q u1.q
-prec u4.q u2.q
-succ u4.q u2.q
dot u4.q u2.q
value -l:u4.q
prec u1.1 u4.q
succ u1.1 u4.q
-dot u1.1 u4.q
prec u2.1 u3.q
-succ u2.1 u3.q
-dot u2.1 u3.q
-prec u3.1 u2.q
prec u4.1 u1.q
dot u3.1 u2.q
-dot u4.1 u1.q
succ u1.q u4.1
-dot u1.q u4.1
succ u2.q u3.1
-dot u2.q u3.1
prec u3.q u2.1
-succ u3.q u2.1
dot u3.q u2.1
prec u4.q u1.1
succ u4.q u1.1
-dot u4.q u1.1
prec u1.q u4.q
succ u1.q u4.q
-dot u1.q u4.q
prec u2.q u3.q
succ u2.q u3.q
-dot u2.q u3.q
-prec u3.q u2.q
-succ u3.q u2.q
dot u3.q u2.q
prec u4.q u1.q
succ u4.q u1.q
-dot u4.q u1.q
value l:u2.q p1:u3.q p1*p2/(l+p2):u4.q
succ u2.1 u1.q
value l:u1.q -p3:u4.q -p1*p2/(l+p2):u3.q
succ u2.1 u2.q
value -(l+p2):u3.q -p2:u4.q
succ u3.1 u1.q
value -(l+p2):u4.q -p2:u3.q
succ u4.1 u2.q
value (l+p2):u4.q p2:u3.q
succ u3.1 u2.q
value (l+p2):u3.q p2:u4.q
succ u4.1 u1.q
value l:u2.q p1:u3.q p1*p2/(l+p2):u4.q
prec u1.q u2.1
value -(l+p2):u3.q -p2:u4.q
prec u1.q u3.1
value (l+p2):u3.q p2:u4.q
prec u1.q u4.1
value l:u1.q p1:u4.q p1*p2/(l+p2):u3.q
prec u2.q u2.1
value -(l+p2):u4.q -p2:u3.q
prec u2.q u3.1
value (l+p2):u4.q p2:u3.q
prec u2.q u4.1
value l:u2.1 p1:u3.1 p1*p2/(l+p2):u4.1
prec u1.1 u2.1
succ u2.1 u1.1
value -(l+p2):u3.1 -p2:u4.1
prec u1.1 u3.1
succ u3.1 u1.1
value (l+p2):u3.1 p2:u4.1
prec u1.1 u4.1
succ u4.1 u1.1
value l:u1.1 p1:u4.1 p1*p2/(l+p2):u3.1
prec u2.1 u2.1
value l:u1.1 -p1:u4.1 -p1*p2/(l+p2):u3.1
succ u2.1 u2.1
value -(l+p2):u4.1 p2:u3.1
prec u2.1 u3.1
value (l+p2):u4.1 p2:u3.1
prec u2.1 u4.1
value -l:u1.1
prec u1.1 u1.1
succ u1.1 u1.1
-dot u1.1 u1.1
-dot u2.1 u2.1
-dot u1.1 u1.1
value -l:u2.1
succ u1.1 u2.1
-dot u1.1 u2.1
prec u2.1 u1.1
-dot u2.1 u1.1
value -l:u3.1
succ u1.1 u3.1
-dot u1.1 u3.1
prec u3.1 u1.1
-succ u2.1 u4.1
-dot u2.1 u4.1
-dot u3.1 u1.1
prec u4.1 u2.1
dot u4.1 u2.1
value -l:u4.1
succ u1.1 u4.1
-dot u1.1 u4.1
-succ u2.1 u3.1
-dot u2.1 u3.1
prec u3.1 u2.1
dot u3.1 u2.1
prec u4.1 u1.1
-dot u4.1 u1.1
value (l+p2):u4.1 p2:u3.1
succ u3.1 u2.1
value -(l+p2):u4.1 -p2:u3.1
succ u4.1 u2.1
";

const TABLE_TWO_DIM_SUM: &str = "
value -l:u2.q
diamond u1.1 u1.q
diamond u1.q u1.1
diamond u1.1 u2.q
diamond u2.q u1.1
diamond u2.1 u1.q
diamond u1.q u2.1
diamond u2.1 u2.q
diamond u2.q u2.1
diamond u2.q u2.q
diamond u1.q u2.q
diamond u2.q u1.q
value l:u1.q -2*l:u2.q
diamond u1.q u1.q
value -l:u1.1
diamond u1.1 u1.1
value -l:u2.1
diamond u1.1 u2.1
diamond u2.1 u1.1
diamond u2.1 u2.1
";

const TABLE_TAFT_SUM: &str = "
value -l:u1.q
diamond u1.1 u1.q
diamond u1.q u1.1
diamond u1.q u1.q
diamond u2.q u2.q
value -l:u2.q
diamond u1.1 u2.q
diamond u2.q u1.1
diamond u1.q u2.q
diamond u2.q u1.q
value -l:u3.q
diamond u1.1 u3.q
diamond u3.q u1.1
-diamond u2.1 u4.q
diamond u4.q u2.1
diamond u1.q u3.q
diamond u3.q u1.q
diamond u2.q u4.q
-diamond u4.q u2.q
value -l:u4.q
diamond u1.1 u4.q
diamond u4.q u1.1
-diamond u2.1 u3.q
diamond u3.q u2.1
diamond u1.q u4.q
diamond u4.q u1.q
diamond u2.q u3.q
-diamond u3.q u2.q
value l:u2.q p1:u3.q p1*p2/(l+p2):u4.q
diamond u2.1 u1.q
diamond u1.q u2.1
value l:u1.q -p3:u4.q -p1*p2/(l+p2):u3.q
diamond u2.1 u2.q
value -(l+p2):u3.q -p2:u4.q
diamond u3.1 u1.q
diamond u1.q u3.1
value l:u1.q p1:u4.q p1*p2/(l+p2):u3.q
diamond u2.q u2.1
value (l+p2):u4.q p2:u3.q
diamond u3.1 u2.q
-diamond u2.q u3.1
value -l:u1.1
diamond u1.1 u1.1
value (l+p2):u3.q p2:u4.q
diamond u4.1 u1.q
diamond u1.q u4.1
value 3*l:u1.1
diamond u2.1 u2.1
value (l+p2):u4.q p2:u3.q
-diamond u4.1 u2.q
diamond u2.q u4.1
value (l-p2):u4.1 p2:u3.1
diamond u2.1 u3.1
value l:u2.1 p1:u3.1 p1*p2/(l+p2):u4.1
diamond u1.1 u2.1
diamond u2.1 u1.1
value -(l+p2):u3.1 -p2:u4.1
diamond u1.1 u3.1
diamond u3.1 u1.1
value (l+p2):u4.1 (2*l+p2):u3.1
diamond u2.1 u4.1
-diamond u4.1 u2.1
value (l+p2):u3.1 p2:u4.1
diamond u4.1 u1.1
diamond u1.1 u4.1
value (-l+p2):u4.1 p2:u3.1
diamond u3.1 u2.1
";

const TABLE_TWO_DIM_PRELIE: &str = "
value -l:u1.q
ast u1.1 u1.q
ast u1.q u1.1
ast u1.q u1.q
value -l:u2.q
ast u1.1 u2.q
ast u2.q u1.1
ast u2.1 u1.q
ast u1.q u2.1
ast u2.1 u2.q
ast u2.q u2.1
ast u2.q u2.q
ast u1.q u2.q
ast u2.q u1.q
value -l:u2.1
ast u1.1 u2.1
ast u2.1 u1.1
ast u2.1 u2.1
value -l:u1.1
ast u1.1 u1.1
";

const TABLE_TAFT_PRELIE: &str = "
value -l:u1.q
ast u1.1 u1.q
ast u1.q u1.1
ast u2.q u2.1
ast u1.q u1.q
ast u2.q u2.q
value -l:u2.q
ast u1.1 u2.q
ast u2.q u1.1
ast u2.1 u1.q
ast u1.q u2.1
ast u1.q u2.q
ast u2.q u1.q
value -l:u3.q
ast u1.1 u3.q
ast u3.q u1.1
-ast u4.q u2.1
ast u3.1 u1.q
ast u1.q u3.1
ast u2.q u4.1
ast u1.q u3.q
ast u3.q u1.q
ast u2.q u4.q
-ast u4.q u2.q
value -l:u4.q
ast u1.1 u4.q
ast u4.q u1.1
-ast u3.q u2.1
ast u2.q u3.1
ast u4.1 u1.q
ast u1.q u4.1
ast u1.q u4.q
ast u4.q u1.q
ast u2.q u3.q
-ast u3.q u2.q
value -l:u1.q -p3:u4.q -p1:u4.q -2*p1*p2/(l+p2):u3.q
ast u2.1 u2.q
value 3*l:u4.q
ast u2.1 u3.q
value 3*l:u3.q
ast u2.1 u4.q
value (l+2*p2):u4.q 2*p2:u3.q
ast u3.1 u2.q
value -l:u1.1
ast u1.1 u1.1
value -2*(l+p2):u4.q -(l+2*p2):u3.q
ast u4.1 u2.q
value -l:u2.1
ast u1.1 u2.1
ast u2.1 u1.1
value -l:u3.1
ast u1.1 u3.1
ast u3.1 u1.1
value -l:u4.1
ast u1.1 u4.1
ast u4.1 u1.1
value -l:u1.1 -2*p1:u4.1 -2*p1*p2/(l+p2):u3.1
ast u2.1 u2.1
value 3*l:u4.1
ast u2.1 u3.1
value (l+2*p2):u4.1
ast u3.1 u2.1
value 3*l:u3.1
ast u2.1 u4.1
value -2*(l+p2):u4.1 -(l+2*p2):u3.1
ast u4.1 u2.1
";

const TABLE_TAFT_LIE: &str = "
value -p3:u4.q -p1:u4.q -2*p1*p2/(l+p2):u3.q
bracket u2.1 u2.q
value 2*l:u4.q
bracket u2.1 u3.q
-bracket u2.q u3.q
value 2*l:u3.q
bracket u2.1 u4.q
-bracket u2.q u4.q
value 2*(l+p2):u4.q 2*p2:u3.q
bracket u3.1 u2.q
value -2*(l+p2):u4.q -2*p2:u3.q
bracket u4.1 u2.q
value 2*(l-p2):u4.1
bracket u2.1 u3.1
value 2*(l+p2):u4.1 2*(2*l+p2):u3.1
bracket u2.1 u4.1
";

const SOURCE_NOTE_TWO_DIM: &str = "derived from the operators of 15.8(1): 15.15(a) on the unit grade, 15.15(c) on q; \
    every printed entry instead agrees with 15.15(c) on the unit grade and 15.15(d) on q";

const SOURCE_NOTE_PRELIE: &str = "derived from the operators of 15.8(1): 15.15(a) on the unit grade, 15.15(c) on q; \
    the pre-Lie table is the same for many listed pairs, (c,d) included";

const SOURCE_NOTE_TAFT: &str = "derived from 15.17(f) on the unit grade and 15.17(c) on q, the only listed pair \
    carrying the printed p1, p2 terms; the printed p3 terms have no source";

/// The printed derived tables, ids `15.12(1)`, `15.12(2)`, `15.19a(1)`, ...
pub fn tables() -> Vec<TableEntry> {
    let two = || ("15.15(a)".to_string(), "15.15(c)".to_string());
    let taft = || ("15.17(f)".to_string(), "15.17(c)".to_string());
    let diffs = Expected::Fails("printed entries differ from the derived values; see the diff report");
    let t = |id: &str, algebra, kind, source, text, note: &'static str| TableEntry {
        id: id.into(),
        algebra,
        kind,
        source,
        antisymmetric: kind == TableKind::Lie,
        text,
        expected: if note == SOURCE_NOTE_PRELIE { Expected::Holds } else { diffs.clone() },
        note,
    };
    vec![
        t("15.12(1)", AlgebraId::TwoDim, TableKind::Tridendriform, two(), TABLE_TWO_DIM_TRIDEND, SOURCE_NOTE_TWO_DIM),
        t("15.12(2)", AlgebraId::Taft, TableKind::Tridendriform, taft(), TABLE_TAFT_TRIDEND, SOURCE_NOTE_TAFT),
        t("15.19a(1)", AlgebraId::TwoDim, TableKind::SumProduct, two(), TABLE_TWO_DIM_SUM, SOURCE_NOTE_TWO_DIM),
        t("15.19a(2)", AlgebraId::Taft, TableKind::SumProduct, taft(), TABLE_TAFT_SUM, SOURCE_NOTE_TAFT),
        t("15.20a(1)", AlgebraId::TwoDim, TableKind::PreLie, two(), TABLE_TWO_DIM_PRELIE, SOURCE_NOTE_PRELIE),
        t("15.20a(2)", AlgebraId::Taft, TableKind::PreLie, taft(), TABLE_TAFT_PRELIE, SOURCE_NOTE_TAFT),
        t("15.21a", AlgebraId::Taft, TableKind::Lie, taft(), TABLE_TAFT_LIE, SOURCE_NOTE_TAFT),
    ]
}

/// Canonical form of an example id: `15.12.1`, `ex:15.12(1)` → `15.12(1)`;
/// `15.15a` → `15.15(a)`; `15.5(a, c)` → `15.5(a,c)`.
pub fn normalize_id(raw: &str) -> String {
    let s: String = raw.trim().trim_start_matches("ex:").chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.to_lowercase();
    if s.contains('(') {
        return s;
    }
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut dots = 0;
    while i < bytes.len() && (bytes[i].is_ascii_digit() || (bytes[i] == '.' && dots == 0)) {
        if bytes[i] == '.' {
            dots += 1;
        }
        i += 1;
    }
    let base: String = bytes[..i].iter().collect();
    let rest: String = bytes[i..].iter().collect();
    if rest.is_empty() {
        return base;
    }
    let suffixed = ["15.19", "15.20", "15.21"].contains(&base.as_str());
    if let Some(tail) = rest.strip_prefix('a').filter(|t| suffixed && (t.is_empty() || t.starts_with('.'))) {
        let tail = tail.trim_start_matches('.');
        return if tail.is_empty() { format!("{base}a") } else { format!("{base}a({tail})") };
    }
    format!("{base}({})", rest.trim_start_matches('.'))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_sizes() {
        let ops = operators();
        let count = |p: &str| ops.iter().filter(|e| e.id.starts_with(p)).count();
        assert_eq!(count("15.15("), 11);
        assert_eq!(count("15.16("), 23);
        assert_eq!(count("15.17("), 8);
        let pairs = pairs();
        let count = |p: &str| pairs.iter().filter(|e| e.id.starts_with(p)).count();
        assert_eq!(count("15.5("), 43);
        assert_eq!(count("15.6("), 151);
        assert_eq!(count("15.7("), 8);
        let sh = semi_hopf();
        assert_eq!(sh.len(), 3 + 14 + 3);
    }

    #[test]
    fn every_pair_refers_to_a_listed_operator() {
        let ops: Vec<String> = operators().into_iter().map(|e| e.id).collect();
        for p in pairs().iter().chain(lifts().iter()) {
            assert!(ops.contains(&p.first) && ops.contains(&p.second), "{}", p.id);
        }
    }

    #[test]
    fn tables_parse_and_cover_the_listed_entries() {
        for t in tables() {
            let es = t.printed().unwrap();
            assert!(!es.is_empty(), "{}", t.id);
            for e in &es {
                assert!(t.kind.families().contains(&e.family.as_str()), "{} line {}", t.id, e.line);
            }
        }
        // The two-dimensional tridendriform table lists all 3·16 entries.
        let t = &tables()[0];
        assert_eq!(t.printed().unwrap().len(), 48);
    }

    #[test]
    fn table_parse_errors_point_at_the_line() {
        let mut t = tables().remove(0);
        t.text = "value -l:u2.q\nprec u1.1 u9.q\n";
        match t.printed() {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn id_normalization() {
        assert_eq!(normalize_id("15.12.1"), "15.12(1)");
        assert_eq!(normalize_id("ex:15.12(1)"), "15.12(1)");
        assert_eq!(normalize_id("15.15a"), "15.15(a)");
        assert_eq!(normalize_id("15.5(a, c)"), "15.5(a,c)");
        assert_eq!(normalize_id("15.19a.2"), "15.19a(2)");
        assert_eq!(normalize_id("15.21a"), "15.21a");
        assert_eq!(normalize_id("15.11.2.5"), "15.11(2.5)");
        assert_eq!(normalize_id("15.17"), "15.17");
    }
}
