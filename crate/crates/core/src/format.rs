//! Line-oriented bundle text format.
//!
//! ```text
//! tgraded-bundle 1
//! kind rota-baxter-t-algebra
//! note free text, one line per `note`
//! field rational
//! params lambda p1
//! forbidden p2 lambda+p2
//! grades 1 q
//! cayley
//!   0 1
//!   1 1
//! dims 2 2
//! unit 1 0
//! bilinear mul
//!   1 q 1 2 2 -lambda
//! end
//! operator R weight lambda
//!   grade q
//!     0 1
//!     0 -lambda
//! end
//! coproduct delta
//!   q -> 1 q 1 1 2 1
//! end
//! ```
//!
//! Grades are written by name, basis indices are 1-based and scalars are
//! expressions over the declared parameters (`+ - * /`, parentheses, integer
//! literals, identifiers). Bilinear entries read `p q i j k value` for
//! `u_i(p) · u_j(q) ↦ value · u_k(pq)`; coproduct entries read
//! `pq -> p q k i j value` for `u_k(pq) ↦ value · u_i(p) ⊗ u_j(q)`.
//! Grade-wise tensors (`gradewise-product`, `gradewise-coproduct`) list
//! `grade a b c value` in storage order; `gradewise-unit` and
//! `gradewise-counit` blocks list `grade v1 .. vd`. Operator and antipode
//! matrices are dense, one row per basis image. Zero entries are omitted
//! from sparse blocks; `#` starts a comment line.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grading::{GradeTable, GradedSpace};
use crate::scalar::{Field, ParamExpr};
use crate::structures::{
    AntipodeFamily, BilinearFamily, CoproductFamily, GradewiseTensor, OperatorFamily, ParamBundle,
};

pub const MAGIC: &str = "tgraded-bundle";
pub const VERSION: u32 = 1;

/// Canonical text for a bundle. `load(&save(b)) == b` for every valid bundle.
pub fn save(b: &ParamBundle) -> String {
    let g = &b.grades;
    let name = |x: usize| g.name(x).to_string();
    let mut s = String::new();
    let _ = writeln!(s, "{MAGIC} {VERSION}");
    let _ = writeln!(s, "kind {}", b.kind);
    for l in b.note.lines() {
        let _ = writeln!(s, "note {l}");
    }
    let _ = writeln!(s, "field {}", b.field);
    if !b.params.is_empty() {
        let _ = writeln!(s, "params {}", b.params.join(" "));
    }
    if !b.forbidden.is_empty() {
        let _ = writeln!(s, "forbidden {}", join(&b.forbidden));
    }
    let _ = writeln!(s, "grades {}", g.names().join(" "));
    s.push_str("cayley\n");
    for row in g.rows() {
        let r: Vec<String> = row.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "  {}", r.join(" "));
    }
    let d: Vec<String> = b.space.dims.iter().map(usize::to_string).collect();
    let _ = writeln!(s, "dims {}", d.join(" "));
    if let Some(u) = &b.unit {
        let _ = writeln!(s, "unit {}", join(u));
    }
    for (fam, t) in &b.bilinear {
        let _ = writeln!(s, "bilinear {fam}");
        for (p, q, i, j, k, v) in t.entries() {
            if !v.is_zero() {
                let _ = writeln!(s, "  {} {} {} {} {} {v}", name(p), name(q), i + 1, j + 1, k + 1);
            }
        }
        s.push_str("end\n");
    }
    for (op, r) in &b.operators {
        let _ = writeln!(s, "operator {op} weight {}", r.weight);
        for (x, &dim) in r.dims.iter().enumerate() {
            let _ = writeln!(s, "  grade {}", name(x));
            for i in 0..dim {
                let _ = writeln!(s, "    {}", join(r.image(x, i)));
            }
        }
        s.push_str("end\n");
    }
    let c = &b.coalgebra;
    if let Some(u) = &c.counit {
        let _ = writeln!(s, "counit {}", join(u));
    }
    for (fam, t) in &c.coproducts {
        let _ = writeln!(s, "coproduct {fam}");
        for (p, q, k, i, j, v) in t.entries() {
            if !v.is_zero() {
                let pq = name(g.product(p, q));
                let _ = writeln!(s, "  {pq} -> {} {} {} {} {} {v}", name(p), name(q), k + 1, i + 1, j + 1);
            }
        }
        s.push_str("end\n");
    }
    for (block, map) in [("gradewise-product", &c.gradewise_products), ("gradewise-coproduct", &c.gradewise_coproducts)] {
        for (fam, t) in map {
            let _ = writeln!(s, "{block} {fam}");
            for (x, &dim) in t.dims.iter().enumerate() {
                for a in 0..dim {
                    for bb in 0..dim {
                        for cc in 0..dim {
                            let v = t.get(x, a, bb, cc);
                            if !v.is_zero() {
                                let _ = writeln!(s, "  {} {} {} {} {v}", name(x), a + 1, bb + 1, cc + 1);
                            }
                        }
                    }
                }
            }
            s.push_str("end\n");
        }
    }
    for (block, vs) in [("gradewise-unit", &c.gradewise_units), ("gradewise-counit", &c.gradewise_counit)] {
        if let Some(vs) = vs {
            let _ = writeln!(s, "{block}");
            for (x, v) in vs.iter().enumerate() {
                let _ = writeln!(s, "  {} {}", name(x), join(v));
            }
            s.push_str("end\n");
        }
    }
    if let Some(a) = &c.antipode {
        s.push_str("antipode\n");
        for (x, &(dim, _)) in a.shapes.iter().enumerate() {
            let _ = writeln!(s, "  grade {}", name(x));
            for i in 0..dim {
                let _ = writeln!(s, "    {}", join(a.image(x, i)));
            }
        }
        s.push_str("end\n");
    }
    s
}

fn join(v: &[ParamExpr]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

struct Lines<'a> {
    items: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
    /// Line number reported at end of input.
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split_whitespace().collect::<Vec<_>>()))
            .filter(|(_, t)| !t.is_empty() && !t[0].starts_with('#'))
            .collect();
        Lines { items, pos: 0, last: text.lines().count().max(1) }
    }

    fn peek(&self) -> Option<&(usize, Vec<&'a str>)> {
        self.items.get(self.pos)
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        let item = self.items.get(self.pos).cloned().ok_or_else(|| perr(self.last, format!("unexpected end of input, expected {what}")))?;
        self.pos += 1;
        Ok(item)
    }

    fn keyword(&mut self, kw: &str) -> Result<(usize, Vec<&'a str>)> {
        let (n, t) = self.next(&format!("`{kw}`"))?;
        if t[0] != kw {
            return Err(perr(n, format!("expected `{kw}`, found `{}`", t[0])));
        }
        Ok((n, t[1..].to_vec()))
    }

    /// Body lines of a block up to its `end`.
    fn block(&mut self, header: usize) -> Result<Vec<(usize, Vec<&'a str>)>> {
        let mut out = Vec::new();
        loop {
            let (n, t) = self.next("`end`").map_err(|_| perr(header, "block not closed by `end`"))?;
            if t == ["end"] {
                return Ok(out);
            }
            out.push((n, t));
        }
    }
}

fn expr(line: usize, s: &str) -> Result<ParamExpr> {
    ParamExpr::parse(s).map_err(|e| perr(line, format!("bad scalar `{s}`: {e}")))
}

fn exprs(line: usize, ts: &[&str]) -> Result<Vec<ParamExpr>> {
    ts.iter().map(|t| expr(line, t)).collect()
}

fn number(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| perr(line, format!("expected a non-negative integer, found `{s}`")))
}

/// A 1-based basis index, bounded by `dim`.
fn index(line: usize, s: &str, dim: usize, what: &str) -> Result<usize> {
    let i = number(line, s)?;
    if i == 0 || i > dim {
        return Err(perr(line, format!("{what} index {i} out of range 1..={dim}")));
    }
    Ok(i - 1)
}

fn grade(line: usize, g: &GradeTable, s: &str) -> Result<usize> {
    g.index(s).ok_or_else(|| perr(line, format!("unknown grade `{s}`")))
}

fn arity(line: usize, t: &[&str], n: usize, shape: &str) -> Result<()> {
    if t.len() != n {
        return Err(perr(line, format!("expected `{shape}`")));
    }
    Ok(())
}

fn vector(line: usize, t: &[&str], dim: usize, what: &str) -> Result<Vec<ParamExpr>> {
    if t.len() != dim {
        return Err(perr(line, format!("{what} needs {dim} entries, found {}", t.len())));
    }
    exprs(line, t)
}

/// Dense matrices introduced by `grade <name>` lines, `rows(x)` rows of
/// `cols(x)` entries for grade `x`.
fn dense(
    body: &[(usize, Vec<&str>)],
    header: usize,
    g: &GradeTable,
    rows: impl Fn(usize) -> usize,
    cols: impl Fn(usize) -> usize,
) -> Result<Vec<Vec<ParamExpr>>> {
    let mut mats: Vec<Option<Vec<ParamExpr>>> = vec![None; g.len()];
    let mut it = body.iter().peekable();
    while let Some((n, t)) = it.next() {
        if t[0] != "grade" || t.len() != 2 {
            return Err(perr(*n, "expected `grade <name>`"));
        }
        let x = grade(*n, g, t[1])?;
        if mats[x].is_some() {
            return Err(perr(*n, format!("grade `{}` given twice", t[1])));
        }
        let mut m = Vec::new();
        for _ in 0..rows(x) {
            let (rn, row) = it.next().filter(|(_, r)| r[0] != "grade").ok_or_else(|| perr(*n, format!("grade `{}` needs {} rows", t[1], rows(x))))?;
            m.extend(vector(*rn, row, cols(x), "row")?);
        }
        if let Some((rn, r)) = it.peek() {
            if r[0] != "grade" {
                return Err(perr(*rn, format!("grade `{}` has more than {} rows", t[1], rows(x))));
            }
        }
        mats[x] = Some(m);
    }
    mats.into_iter()
        .enumerate()
        .map(|(x, m)| m.ok_or_else(|| perr(header, format!("missing grade `{}`", g.name(x)))))
        .collect()
}

fn per_grade_vectors(body: &[(usize, Vec<&str>)], header: usize, g: &GradeTable, dims: &[usize]) -> Result<Vec<Vec<ParamExpr>>> {
    let mut out: Vec<Option<Vec<ParamExpr>>> = vec![None; g.len()];
    for (n, t) in body {
        let x = grade(*n, g, t[0])?;
        if out[x].is_some() {
            return Err(perr(*n, format!("grade `{}` given twice", t[0])));
        }
        out[x] = Some(vector(*n, &t[1..], dims[x], "vector")?);
    }
    out.into_iter()
        .enumerate()
        .map(|(x, v)| v.ok_or_else(|| perr(header, format!("missing grade `{}`", g.name(x)))))
        .collect()
}

fn check_params(line: usize, e: &ParamExpr, params: &[String]) -> Result<()> {
    match e.params().into_iter().find(|p| !params.contains(p)) {
        Some(p) => Err(perr(line, format!("undeclared parameter `{p}`"))),
        None => Ok(()),
    }
}

/// Parses and validates a bundle document.
pub fn load(text: &str) -> Result<ParamBundle> {
    let mut ls = Lines::new(text);
    let (n, t) = ls.next("header")?;
    if t.len() != 2 || t[0] != MAGIC {
        return Err(perr(n, format!("expected `{MAGIC} <version>`")));
    }
    if number(n, t[1])? as u32 != VERSION {
        return Err(perr(n, format!("unsupported format version {}", t[1])));
    }
    let (n, t) = ls.keyword("kind")?;
    arity(n, &t, 1, "kind <tag>")?;
    let kind = t[0].to_string();
    let mut note = Vec::new();
    while ls.peek().is_some_and(|(_, t)| t[0] == "note") {
        let (n, _) = ls.next("note")?;
        let raw = text.lines().nth(n - 1).unwrap_or_default().trim_start();
        note.push(raw.strip_prefix("note").unwrap_or_default().trim().to_string());
    }
    let (n, t) = ls.keyword("field")?;
    arity(n, &t, 1, "field <rational|fp:p>")?;
    let field = Field::parse(t[0]).map_err(|e| perr(n, e.to_string()))?;
    let mut params = Vec::new();
    if ls.peek().is_some_and(|(_, t)| t[0] == "params") {
        let (n, t) = ls.next("params")?;
        for p in t[1..].iter() {
            match ParamExpr::parse(p) {
                Ok(ParamExpr::Param(x)) if !params.contains(&x) => params.push(x),
                _ => return Err(perr(n, format!("bad or repeated parameter `{p}`"))),
            }
        }
    }
    let mut forbidden = Vec::new();
    if ls.peek().is_some_and(|(_, t)| t[0] == "forbidden") {
        let (n, t) = ls.next("forbidden")?;
        forbidden = exprs(n, &t[1..])?;
        for e in &forbidden {
            check_params(n, e, &params)?;
        }
    }
    let (gn, names) = ls.keyword("grades")?;
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let (cn, t) = ls.keyword("cayley")?;
    arity(cn, &t, 0, "cayley")?;
    let mut rows = Vec::new();
    for _ in 0..names.len() {
        let (n, t) = ls.next("Cayley row")?;
        rows.push(t.iter().map(|x| number(n, x)).collect::<Result<Vec<_>>>()?);
    }
    let grades = GradeTable::new(names, rows).map_err(|e| perr(gn, e.to_string()))?;
    let (n, t) = ls.keyword("dims")?;
    if t.len() != grades.len() {
        return Err(perr(n, format!("dims needs {} entries", grades.len())));
    }
    let space = GradedSpace { dims: t.iter().map(|x| number(n, x)).collect::<Result<_>>()? };
    let dims = space.dims.clone();

    let mut b = ParamBundle::new(&kind, field, grades.clone(), space.clone());
    b.note = note.join("\n");
    b.params = params;
    b.forbidden = forbidden;
    let g = &grades;

    while let Some((n, t)) = ls.peek().cloned() {
        ls.pos += 1;
        let named = |what: &str| -> Result<String> {
            arity(n, &t, 2, &format!("{what} <name>"))?;
            Ok(t[1].to_string())
        };
        let dup = |taken: bool, what: &str| if taken { Err(perr(n, format!("{what} given twice"))) } else { Ok(()) };
        match t[0] {
            "unit" => {
                dup(b.unit.is_some(), "unit")?;
                let e = g.unit().ok_or_else(|| perr(n, "unit requires a monoid grading"))?;
                b.unit = Some(vector(n, &t[1..], dims[e], "unit")?);
            }
            "counit" => {
                dup(b.coalgebra.counit.is_some(), "counit")?;
                let e = g.unit().ok_or_else(|| perr(n, "counit requires a monoid grading"))?;
                b.coalgebra.counit = Some(vector(n, &t[1..], dims[e], "counit")?);
            }
            "bilinear" => {
                let name = named("bilinear")?;
                dup(b.bilinear.contains_key(&name), &format!("bilinear family `{name}`"))?;
                let mut f = BilinearFamily::filled(g, &space, ParamExpr::zero());
                let mut seen = std::collections::BTreeSet::new();
                for (ln, e) in ls.block(n)? {
                    arity(ln, &e, 6, "p q i j k value")?;
                    let (p, q) = (grade(ln, g, e[0])?, grade(ln, g, e[1])?);
                    let i = index(ln, e[2], dims[p], "i")?;
                    let j = index(ln, e[3], dims[q], "j")?;
                    let k = index(ln, e[4], dims[g.product(p, q)], "k")?;
                    if !seen.insert((p, q, i, j, k)) {
                        return Err(perr(ln, "entry given twice"));
                    }
                    f.set(p, q, i, j, k, expr(ln, e[5])?);
                }
                b.bilinear.insert(name, f);
            }
            "operator" => {
                if t.len() != 4 || t[2] != "weight" {
                    return Err(perr(n, "expected `operator <name> weight <value>`"));
                }
                let name = t[1].to_string();
                dup(b.operators.contains_key(&name), &format!("operator family `{name}`"))?;
                let weight = expr(n, t[3])?;
                let body = ls.block(n)?;
                let matrices = dense(&body, n, g, |x| dims[x], |x| dims[x])?;
                b.operators.insert(name, OperatorFamily { matrices, dims: dims.clone(), weight });
            }
            "coproduct" => {
                let name = named("coproduct")?;
                dup(b.coalgebra.coproducts.contains_key(&name), &format!("coproduct family `{name}`"))?;
                let mut f = CoproductFamily::from_fn(g, &space, |_, _, _, _, _| ParamExpr::zero());
                let mut seen = std::collections::BTreeSet::new();
                for (ln, e) in ls.block(n)? {
                    if e.len() != 8 || e[1] != "->" {
                        return Err(perr(ln, "expected `pq -> p q k i j value`"));
                    }
                    let (pq, p, q) = (grade(ln, g, e[0])?, grade(ln, g, e[2])?, grade(ln, g, e[3])?);
                    if g.product(p, q) != pq {
                        return Err(perr(ln, format!("{}{} is {}, not {}", e[2], e[3], g.name(g.product(p, q)), e[0])));
                    }
                    let k = index(ln, e[4], dims[pq], "k")?;
                    let i = index(ln, e[5], dims[p], "i")?;
                    let j = index(ln, e[6], dims[q], "j")?;
                    if !seen.insert((p, q, k, i, j)) {
                        return Err(perr(ln, "entry given twice"));
                    }
                    f.set(p, q, k, i, j, expr(ln, e[7])?);
                }
                b.coalgebra.coproducts.insert(name, f);
            }
            kw @ ("gradewise-product" | "gradewise-coproduct") => {
                let name = named(kw)?;
                let map = if kw == "gradewise-product" { &b.coalgebra.gradewise_products } else { &b.coalgebra.gradewise_coproducts };
                dup(map.contains_key(&name), &format!("{kw} `{name}`"))?;
                let mut tensors: Vec<Vec<ParamExpr>> = dims.iter().map(|&d| vec![ParamExpr::zero(); d * d * d]).collect();
                let mut seen = std::collections::BTreeSet::new();
                for (ln, e) in ls.block(n)? {
                    arity(ln, &e, 5, "grade a b c value")?;
                    let x = grade(ln, g, e[0])?;
                    let d = dims[x];
                    let (a, bb, c) = (index(ln, e[1], d, "a")?, index(ln, e[2], d, "b")?, index(ln, e[3], d, "c")?);
                    if !seen.insert((x, a, bb, c)) {
                        return Err(perr(ln, "entry given twice"));
                    }
                    tensors[x][(a * d + bb) * d + c] = expr(ln, e[4])?;
                }
                let t = GradewiseTensor { dims: dims.clone(), tensors };
                if kw == "gradewise-product" {
                    b.coalgebra.gradewise_products.insert(name, t);
                } else {
                    b.coalgebra.gradewise_coproducts.insert(name, t);
                }
            }
            "gradewise-unit" => {
                arity(n, &t, 1, "gradewise-unit")?;
                dup(b.coalgebra.gradewise_units.is_some(), "gradewise-unit")?;
                let body = ls.block(n)?;
                b.coalgebra.gradewise_units = Some(per_grade_vectors(&body, n, g, &dims)?);
            }
            "gradewise-counit" => {
                arity(n, &t, 1, "gradewise-counit")?;
                dup(b.coalgebra.gradewise_counit.is_some(), "gradewise-counit")?;
                let body = ls.block(n)?;
                b.coalgebra.gradewise_counit = Some(per_grade_vectors(&body, n, g, &dims)?);
            }
            "antipode" => {
                arity(n, &t, 1, "antipode")?;
                dup(b.coalgebra.antipode.is_some(), "antipode")?;
                g.require_group().map_err(|e| perr(n, e.to_string()))?;
                let inv = |x: usize| g.inverse(x).unwrap();
                let body = ls.block(n)?;
                let matrices = dense(&body, n, g, |x| dims[x], |x| dims[inv(x)])?;
                let shapes = (0..g.len()).map(|x| (dims[x], dims[inv(x)])).collect();
                b.coalgebra.antipode = Some(AntipodeFamily { shapes, matrices });
            }
            other => return Err(perr(n, format!("unknown block `{other}`"))),
        }
    }
    let params = b.params.clone();
    b.try_map(|e| check_params(0, e, &params)).map_err(|e| match e {
        Error::Parse { msg, .. } => perr(ls.last, msg),
        e => e,
    })?;
    b.validate().map_err(|e| perr(ls.last, e.to_string()))?;
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{rb_to_dendriform, Mode};
    use crate::corpus;
    use crate::grading::GradeTable;

    fn roundtrip(b: &ParamBundle) {
        let text = save(b);
        let back = load(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(&back, b);
        assert_eq!(save(&back), text);
    }

    #[test]
    fn corpus_bundles_roundtrip() {
        for e in corpus::operators() {
            roundtrip(&e.bundle());
        }
    }

    #[test]
    fn derived_dendriform_roundtrips() {
        let e = corpus::operator("15.16(d)").unwrap();
        let b = e.bundle().specialize(&[("lambda".to_string(), Field::Rational.from_int(2))].into()).unwrap();
        roundtrip(&rb_to_dendriform(&b, Mode::Checked).unwrap().to_param());
    }

    #[test]
    fn zero_dimensional_bundle_loads() {
        let g = GradeTable::cyclic(2);
        let sp = GradedSpace { dims: vec![0, 0] };
        let b = ParamBundle::new("t-algebra", Field::Rational, g.clone(), sp.clone())
            .with_family("mul", BilinearFamily::filled(&g, &sp, ParamExpr::zero()))
            .with_operator("R", OperatorFamily { matrices: vec![vec![], vec![]], dims: vec![0, 0], weight: ParamExpr::int(1) });
        roundtrip(&b);
    }

    #[test]
    fn out_of_range_output_index_is_rejected() {
        let e = corpus::operator("15.15(a)").unwrap();
        let text = save(&e.bundle());
        let bad = text.replacen("bilinear mul\n", "bilinear mul\n  1 1 1 1 3 1\n", 1);
        let line = bad.lines().position(|l| l == "  1 1 1 1 3 1").unwrap() + 1;
        match load(&bad) {
            Err(Error::Parse { line: l, msg }) => {
                assert_eq!(l, line);
                assert!(msg.contains("k index 3"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let good = save(&corpus::operator("15.15(a)").unwrap().bundle());
        for (from, to) in [
            ("tgraded-bundle 1", "tgraded-bundle 9"),
            ("cayley\n  0 1\n", "cayley\n  0 2\n"),
            ("operator R weight lambda", "operator R weight mu"),
            ("end\n", ""),
        ] {
            assert!(good.contains(from), "{from}");
            let bad = good.replacen(from, to, 1);
            assert!(matches!(load(&bad), Err(Error::Parse { .. })), "{from} -> {to}");
        }
    }
}
