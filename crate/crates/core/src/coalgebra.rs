//! Coalgebra-side checkers, duality and the coalgebra constructions.
//!
//! Elements of `C_p ⊗ C_q` are flat vectors indexed `i * dim(q) + j`.

use std::rc::Rc;

use crate::constructions::Mode;
use crate::error::{Error, Result};
use crate::laws::{check, rota_baxter, t_algebra, Ctx, Identity, Law, Variant};
use crate::scalar::{Field, FieldElement};
use crate::structures::{
    add, axpy, basis, scale, zeros, AntipodeFamily, BilinearFamily, Bundle, CoalgebraData, CoproductFamily,
    GradewiseTensor, Vector,
};

/// Name of the grade-wise coproduct family.
pub const DELTA_PHI: &str = "delta_phi";
/// Name of the grade-wise product family.
pub const MU_PHI: &str = "mu_phi";

/// Coproduct name dual to a product name.
pub fn dual_name(product: &str) -> String {
    match product {
        "mul" => "delta".into(),
        MU_PHI => DELTA_PHI.into(),
        other => format!("delta_{other}"),
    }
}

/// Product name dual to a coproduct name.
pub fn undual_name(coproduct: &str) -> String {
    match coproduct {
        "delta" => "mul".into(),
        DELTA_PHI => MU_PHI.into(),
        other => other.strip_prefix("delta_").unwrap_or(other).into(),
    }
}

/// Applies `f ⊗ id` to `v ∈ A ⊗ B` where `f` maps into a space of dimension `da2`.
pub(crate) fn apply_left(field: &Field, v: &[FieldElement], (da, db): (usize, usize), da2: usize, f: impl Fn(&[FieldElement]) -> Vector) -> Vector {
    let mut out = zeros(field, da2 * db);
    for i in 0..da {
        if (0..db).all(|j| v[i * db + j].is_zero()) {
            continue;
        }
        let img = f(&basis(field, da, i));
        for j in 0..db {
            let c = &v[i * db + j];
            if c.is_zero() {
                continue;
            }
            for (i2, x) in img.iter().enumerate() {
                if !x.is_zero() {
                    out[i2 * db + j] = &out[i2 * db + j] + &(c * x);
                }
            }
        }
    }
    out
}

/// Applies `id ⊗ f` to `v ∈ A ⊗ B` where `f` maps into a space of dimension `db2`.
pub(crate) fn apply_right(field: &Field, v: &[FieldElement], (da, db): (usize, usize), db2: usize, f: impl Fn(&[FieldElement]) -> Vector) -> Vector {
    let mut out = zeros(field, da * db2);
    for j in 0..db {
        if (0..da).all(|i| v[i * db + j].is_zero()) {
            continue;
        }
        let img = f(&basis(field, db, j));
        for i in 0..da {
            axpy(&mut out[i * db2..(i + 1) * db2], &v[i * db + j], &img);
        }
    }
    out
}

fn outer(x: &[FieldElement], y: &[FieldElement]) -> Vector {
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

fn dot(x: &[FieldElement], y: &[FieldElement], field: &Field) -> FieldElement {
    x.iter().zip(y).fold(field.zero(), |acc, (a, b)| &acc + &(a * b))
}

/// `Σ x ⊗ y ↦ Σ (x₁y₁) ⊗ (x₂y₂)`; `m1` and `m2` multiply basis vectors.
#[allow(clippy::too_many_arguments)]
fn shuffle(
    field: &Field,
    x: &[FieldElement],
    (dx1, dx2): (usize, usize),
    y: &[FieldElement],
    (dy1, dy2): (usize, usize),
    (dr1, dr2): (usize, usize),
    m1: impl Fn(usize, usize) -> Vector,
    m2: impl Fn(usize, usize) -> Vector,
) -> Vector {
    let p1: Vec<Vector> = (0..dx1 * dy1).map(|ij| m1(ij / dy1, ij % dy1)).collect();
    let p2: Vec<Vector> = (0..dx2 * dy2).map(|ij| m2(ij / dy2, ij % dy2)).collect();
    let mut out = zeros(field, dr1 * dr2);
    for (xi, xc) in x.iter().enumerate().filter(|e| !e.1.is_zero()) {
        let (i1, i2) = (xi / dx2, xi % dx2);
        for (yi, yc) in y.iter().enumerate().filter(|e| !e.1.is_zero()) {
            let (j1, j2) = (yi / dy2, yi % dy2);
            let c = xc * yc;
            axpy(&mut out, &c, &outer(&p1[i1 * dy1 + j1], &p2[i2 * dy2 + j2]));
        }
    }
    out
}

type Cop<'a> = Rc<dyn Fn(usize, usize, &[FieldElement]) -> Vector + 'a>;

fn cop<'a>(cx: Ctx<'a>, name: &str) -> Result<Cop<'a>> {
    let d = cx.b.coproduct(name)?;
    let f = cx.f;
    Ok(Rc::new(move |p: usize, q: usize, v: &[FieldElement]| d.apply(p, q, v, f)))
}

fn gradewise<'a>(cx: Ctx<'a>, products: bool, name: &str) -> Result<&'a GradewiseTensor<FieldElement>> {
    let c = &cx.b.coalgebra;
    let map = if products { &c.gradewise_products } else { &c.gradewise_coproducts };
    map.get(name).ok_or_else(|| Error::Missing(format!("grade-wise family `{name}`")))
}

/// `Δ_φ(v)`, flat `d × d`.
fn gw_coproduct(t: &GradewiseTensor<FieldElement>, g: usize, v: &[FieldElement], field: &Field) -> Vector {
    let d = t.dims[g];
    let mut out = zeros(field, d * d);
    for (k, c) in v.iter().enumerate() {
        axpy(&mut out, c, t.block(g, k));
    }
    out
}

/// `μ_φ(a, b)`.
fn gw_product(t: &GradewiseTensor<FieldElement>, g: usize, a: &[FieldElement], b: &[FieldElement], field: &Field) -> Vector {
    let mut out = zeros(field, t.dims[g]);
    for (i, x) in a.iter().enumerate().filter(|e| !e.1.is_zero()) {
        for (j, y) in b.iter().enumerate().filter(|e| !e.1.is_zero()) {
            axpy(&mut out, &(x * y), t.fibre(g, i, j));
        }
    }
    out
}

/// `μ_{p,q}` applied to a flat element of `A_p ⊗ A_q`.
fn contract(fam: &BilinearFamily<FieldElement>, p: usize, q: usize, v: &[FieldElement], field: &Field) -> Vector {
    let (_, dq, dr) = fam.shape(p, q);
    let mut out = zeros(field, dr);
    for (ij, c) in v.iter().enumerate() {
        axpy(&mut out, c, fam.entry(p, q, ij / dq, ij % dq));
    }
    out
}

/// Transposed associativity-type identities: for each spec
/// `(Σ inner_l ⊗ id) outer_l = (id ⊗ Σ inner_r) outer_r` on `C_{pqt}`.
fn cotable<'a>(cx: Ctx<'a>, spec: Vec<(&'static str, Vec<Cop<'a>>, Cop<'a>, Cop<'a>, Vec<Cop<'a>>)>) -> Vec<Identity<'a>> {
    spec.into_iter()
        .map(|(name, inner_l, outer_l, outer_r, inner_r)| {
            Identity::new(
                name,
                3,
                move |g: &[usize]| vec![cx.dim(cx.pq(cx.pq(g[0], g[1]), g[2]))],
                move |g, i| {
                    let (p, q, t) = (g[0], g[1], g[2]);
                    let (pq, qt) = (cx.pq(p, q), cx.pq(q, t));
                    let v = cx.e(cx.pq(pq, t), i[0]);
                    let x = outer_l(pq, t, &v);
                    let mut lhs = zeros(cx.f, cx.dim(p) * cx.dim(q) * cx.dim(t));
                    for op in &inner_l {
                        lhs = add(&lhs, &apply_left(cx.f, &x, (cx.dim(pq), cx.dim(t)), cx.dim(p) * cx.dim(q), |y| op(p, q, y)));
                    }
                    let y = outer_r(p, qt, &v);
                    let mut rhs = zeros(cx.f, lhs.len());
                    for op in &inner_r {
                        rhs = add(&rhs, &apply_right(cx.f, &y, (cx.dim(p), cx.dim(qt)), cx.dim(q) * cx.dim(t), |z| op(q, t, z)));
                    }
                    (lhs, rhs)
                },
            )
        })
        .collect()
}

fn t_coalgebra(cx: Ctx<'_>, counital: bool) -> Result<Vec<Identity<'_>>> {
    let d = cop(cx, "delta")?;
    let mut ids = cotable(cx, vec![("coassociativity", vec![d.clone()], d.clone(), d.clone(), vec![d.clone()])]);
    if counital {
        let e = cx.g.require_unit()?;
        let eps = cx.b.coalgebra.counit.clone().ok_or_else(|| Error::Missing("counit".into()))?;
        let eps = Rc::new(eps);
        let (d1, d2, eps1, eps2) = (d.clone(), d, eps.clone(), eps);
        ids.push(Identity::new("counit-right", 1, move |g: &[usize]| cx.dims(g), move |g, i| {
            let v = cx.e(g[0], i[0]);
            let x = d1(g[0], e, &v);
            (apply_right(cx.f, &x, (cx.dim(g[0]), cx.dim(e)), 1, |y| vec![dot(&eps1, y, cx.f)]), v)
        }));
        ids.push(Identity::new("counit-left", 1, move |g: &[usize]| cx.dims(g), move |g, i| {
            let v = cx.e(g[0], i[0]);
            let x = d2(e, g[0], &v);
            (apply_left(cx.f, &x, (cx.dim(e), cx.dim(g[0])), 1, |y| vec![dot(&eps2, y, cx.f)]), v)
        }));
    }
    Ok(ids)
}

/// `(Q⊗Q)Δ = (id⊗Q)ΔQ + (Q⊗id)ΔQ + γΔQ`.
fn co_rota_baxter(cx: Ctx<'_>) -> Result<Vec<Identity<'_>>> {
    let d = cop(cx, "delta")?;
    let (q, gamma) = cx.operator("Q")?;
    Ok(vec![Identity::new("co-rota-baxter", 2, move |g: &[usize]| vec![cx.dim(cx.pq(g[0], g[1]))], move |g, i| {
        let (p, t) = (g[0], g[1]);
        let (dp, dt) = (cx.dim(p), cx.dim(t));
        let v = cx.e(cx.pq(p, t), i[0]);
        let x = d(p, t, &v);
        let lhs = apply_left(cx.f, &apply_right(cx.f, &x, (dp, dt), dt, |y| q(t, y)), (dp, dt), dp, |y| q(p, y));
        let y = d(p, t, &q(cx.pq(p, t), &v));
        let mut rhs = add(
            &apply_right(cx.f, &y, (dp, dt), dt, |z| q(t, z)),
            &apply_left(cx.f, &y, (dp, dt), dp, |z| q(p, z)),
        );
        axpy(&mut rhs, &gamma, &y);
        (lhs, rhs)
    })])
}

fn split_coalgebra(cx: Ctx<'_>, variant: Variant) -> Result<Vec<Identity<'_>>> {
    let l = cop(cx, "delta_prec")?;
    let s = cop(cx, "delta_succ")?;
    let spec = match variant {
        Variant::Dendriform => vec![
            ("dendriform-coalgebra-1", vec![l.clone()], l.clone(), l.clone(), vec![l.clone(), s.clone()]),
            ("dendriform-coalgebra-2", vec![s.clone()], l.clone(), s.clone(), vec![l.clone()]),
            ("dendriform-coalgebra-3", vec![l.clone(), s.clone()], s.clone(), s.clone(), vec![s]),
        ],
        Variant::Tridendriform => {
            let d = cop(cx, "delta_dot")?;
            vec![
                ("tridendriform-coalgebra-1", vec![l.clone()], l.clone(), l.clone(), vec![l.clone(), s.clone(), d.clone()]),
                ("tridendriform-coalgebra-2", vec![s.clone()], l.clone(), s.clone(), vec![l.clone()]),
                ("tridendriform-coalgebra-3", vec![l.clone(), s.clone(), d.clone()], s.clone(), s.clone(), vec![s.clone()]),
                ("tridendriform-coalgebra-4", vec![s.clone()], d.clone(), s.clone(), vec![d.clone()]),
                ("tridendriform-coalgebra-5", vec![l.clone()], d.clone(), d.clone(), vec![s]),
                ("tridendriform-coalgebra-6", vec![d.clone()], l.clone(), d.clone(), vec![l]),
                ("tridendriform-coalgebra-7", vec![d.clone()], d.clone(), d.clone(), vec![d]),
            ]
        }
    };
    Ok(cotable(cx, spec))
}

fn semi_hopf(cx: Ctx<'_>) -> Result<Vec<Identity<'_>>> {
    let unital = cx.b.unit.is_some();
    let mut ids = t_algebra(cx, "mul", unital, false)?;
    ids.extend(rota_baxter(cx, "mul", "R")?);
    let delta = gradewise(cx, false, DELTA_PHI)?;
    let eps: &Vec<Vec<FieldElement>> =
        cx.b.coalgebra.gradewise_counit.as_ref().ok_or_else(|| Error::Missing("grade-wise counit".into()))?;
    let mul = cx.b.family("mul")?;
    let (r, w) = cx.operator("R")?;
    let f = cx.f;
    let dd = move |g: usize, v: &[FieldElement]| gw_coproduct(delta, g, v, f);
    let shape1 = move |g: &[usize]| cx.dims(g);
    ids.push(Identity::new("coassociativity", 1, shape1, move |g, i| {
        let (p, d) = (g[0], cx.dim(g[0]));
        let x = dd(p, &cx.e(p, i[0]));
        (apply_left(f, &x, (d, d), d * d, |y| dd(p, y)), apply_right(f, &x, (d, d), d * d, |y| dd(p, y)))
    }));
    ids.push(Identity::new("counit-right", 1, shape1, move |g, i| {
        let (p, d) = (g[0], cx.dim(g[0]));
        let v = cx.e(p, i[0]);
        (apply_right(f, &dd(p, &v), (d, d), 1, |y| vec![dot(&eps[p], y, f)]), v)
    }));
    ids.push(Identity::new("counit-left", 1, shape1, move |g, i| {
        let (p, d) = (g[0], cx.dim(g[0]));
        let v = cx.e(p, i[0]);
        (apply_left(f, &dd(p, &v), (d, d), 1, |y| vec![dot(&eps[p], y, f)]), v)
    }));
    ids.push(Identity::new("comultiplicative", 2, shape1, move |g, i| {
        let (p, q) = (g[0], g[1]);
        let (dp, dq, pq) = (cx.dim(p), cx.dim(q), cx.pq(p, q));
        let lhs = dd(pq, mul.entry(p, q, i[0], i[1]));
        let x = dd(p, &cx.e(p, i[0]));
        let y = dd(q, &cx.e(q, i[1]));
        let m = |a: usize, b: usize| mul.entry(p, q, a, b).to_vec();
        let rhs = shuffle(f, &x, (dp, dp), &y, (dq, dq), (cx.dim(pq), cx.dim(pq)), m, m);
        (lhs, rhs)
    }));
    ids.push(Identity::new("counit-multiplicative", 2, shape1, move |g, i| {
        let (p, q) = (g[0], g[1]);
        let lhs = dot(&eps[cx.pq(p, q)], mul.entry(p, q, i[0], i[1]), f);
        (vec![lhs], vec![&eps[p][i[0]] * &eps[q][i[1]]])
    }));
    ids.push(Identity::new("cooperator", 1, shape1, move |g, i| {
        let (p, d) = (g[0], cx.dim(g[0]));
        let v = cx.e(p, i[0]);
        let x = dd(p, &v);
        let lhs = apply_left(f, &apply_right(f, &x, (d, d), d, |y| r(p, y)), (d, d), d, |y| r(p, y));
        let y = dd(p, &r(p, &v));
        let mut rhs = add(&apply_left(f, &y, (d, d), d, |z| r(p, z)), &apply_right(f, &y, (d, d), d, |z| r(p, z)));
        axpy(&mut rhs, &w, &y);
        (lhs, rhs)
    }));
    if let Some(eta) = &cx.b.unit {
        let e = cx.g.require_unit()?;
        ids.push(Identity::new("unit-comultiplicative", 0, |_: &[usize]| vec![], move |_, _| {
            (dd(e, eta), outer(eta, eta))
        }));
        ids.push(Identity::new("unit-counit", 0, |_: &[usize]| vec![], move |_, _| {
            (vec![dot(&eps[e], eta, f)], vec![f.one()])
        }));
    }
    Ok(ids)
}

fn hopf(cx: Ctx<'_>) -> Result<Vec<Identity<'_>>> {
    cx.g.require_group()?;
    let e = cx.g.require_unit()?;
    if cx.b.unit.is_none() {
        return Err(Error::Missing("unit".into()));
    }
    let mut ids = semi_hopf(cx)?;
    let s = cx.b.coalgebra.antipode.as_ref().ok_or_else(|| Error::Missing("antipode".into()))?;
    let delta = gradewise(cx, false, DELTA_PHI)?;
    let eps = cx.b.coalgebra.gradewise_counit.as_ref().expect("checked by semi_hopf");
    let eta = cx.b.unit.as_ref().expect("checked above");
    let mul = cx.b.family("mul")?;
    let (r, _) = cx.operator("R")?;
    let (f, g) = (cx.f, cx.g);
    let shape1 = move |gs: &[usize]| cx.dims(gs);
    let rhs = move |p: usize, v: &[FieldElement]| scale(&dot(&eps[p], v, f), eta);
    ids.push(Identity::new("antipode-left", 1, shape1, move |gs, i| {
        let (p, d) = (gs[0], cx.dim(gs[0]));
        let inv = g.inverse(p).unwrap();
        let v = cx.e(p, i[0]);
        let x = apply_left(f, &gw_coproduct(delta, p, &v, f), (d, d), cx.dim(inv), |y| s.apply(p, y, f));
        (contract(mul, inv, p, &x, f), rhs(p, &v))
    }));
    ids.push(Identity::new("antipode-right", 1, shape1, move |gs, i| {
        let (p, d) = (gs[0], cx.dim(gs[0]));
        let inv = g.inverse(p).unwrap();
        let v = cx.e(p, i[0]);
        let x = apply_right(f, &gw_coproduct(delta, p, &v, f), (d, d), cx.dim(inv), |y| s.apply(p, y, f));
        (contract(mul, p, inv, &x, f), rhs(p, &v))
    }));
    ids.push(Identity::new("antipode-operator", 1, shape1, move |gs, i| {
        let p = gs[0];
        let v = cx.e(p, i[0]);
        (s.apply(p, &r(p, &v), f), r(g.inverse(p).unwrap(), &s.apply(p, &v, f)))
    }));
    let _ = e;
    Ok(ids)
}

fn hopf_t_coalgebra(cx: Ctx<'_>) -> Result<Vec<Identity<'_>>> {
    cx.g.require_group()?;
    let e = cx.g.require_unit()?;
    let mut ids = t_coalgebra(cx, true)?;
    let delta = cop(cx, "delta")?;
    let eps = cx.b.coalgebra.counit.as_ref().expect("checked by t_coalgebra");
    let mu = gradewise(cx, true, MU_PHI)?;
    let etas: &Vec<Vec<FieldElement>> =
        cx.b.coalgebra.gradewise_units.as_ref().ok_or_else(|| Error::Missing("grade-wise units".into()))?;
    let s = cx.b.coalgebra.antipode.as_ref().ok_or_else(|| Error::Missing("antipode".into()))?;
    let (q, gamma) = cx.operator("Q")?;
    let q = Rc::new(q);
    let (f, g) = (cx.f, cx.g);
    let m = move |p: usize, a: &[FieldElement], b: &[FieldElement]| gw_product(mu, p, a, b, f);
    let shape1 = move |gs: &[usize]| cx.dims(gs);
    ids.push(Identity::new("gradewise-associativity", 1, move |gs: &[usize]| vec![cx.dim(gs[0]); 3], move |gs, i| {
        let p = gs[0];
        let (a, b, c) = (cx.e(p, i[0]), cx.e(p, i[1]), cx.e(p, i[2]));
        (m(p, &m(p, &a, &b), &c), m(p, &a, &m(p, &b, &c)))
    }));
    ids.push(Identity::new("gradewise-left-unit", 1, shape1, move |gs, i| {
        let a = cx.e(gs[0], i[0]);
        (m(gs[0], &etas[gs[0]], &a), a)
    }));
    ids.push(Identity::new("gradewise-right-unit", 1, shape1, move |gs, i| {
        let a = cx.e(gs[0], i[0]);
        (m(gs[0], &a, &etas[gs[0]]), a)
    }));
    let q1 = q.clone();
    ids.push(Identity::new("gradewise-rota-baxter", 1, move |gs: &[usize]| vec![cx.dim(gs[0]); 2], move |gs, i| {
        let p = gs[0];
        let (a, b) = (cx.e(p, i[0]), cx.e(p, i[1]));
        let (qa, qb) = (q1(p, &a), q1(p, &b));
        let mut inner = add(&m(p, &qa, &b), &m(p, &a, &qb));
        axpy(&mut inner, &gamma, &m(p, &a, &b));
        (m(p, &qa, &qb), q1(p, &inner))
    }));
    let d1 = delta.clone();
    ids.push(Identity::new("coproduct-multiplicative", 2, move |gs: &[usize]| vec![cx.dim(cx.pq(gs[0], gs[1])); 2], move |gs, i| {
        let (p, t) = (gs[0], gs[1]);
        let pt = cx.pq(p, t);
        let (a, b) = (cx.e(pt, i[0]), cx.e(pt, i[1]));
        let lhs = d1(p, t, &m(pt, &a, &b));
        let (dp, dt) = (cx.dim(p), cx.dim(t));
        let (x, y) = (d1(p, t, &a), d1(p, t, &b));
        let mp = |i: usize, j: usize| m(p, &cx.e(p, i), &cx.e(p, j));
        let mt = |i: usize, j: usize| m(t, &cx.e(t, i), &cx.e(t, j));
        (lhs, shuffle(f, &x, (dp, dt), &y, (dp, dt), (dp, dt), mp, mt))
    }));
    let d2 = delta.clone();
    ids.push(Identity::new("coproduct-unital", 2, |_: &[usize]| vec![], move |gs, _| {
        let (p, t) = (gs[0], gs[1]);
        (d2(p, t, &etas[cx.pq(p, t)]), outer(&etas[p], &etas[t]))
    }));
    ids.push(Identity::new("counit-multiplicative", 0, move |_: &[usize]| vec![cx.dim(e); 2], move |_, i| {
        let (a, b) = (cx.e(e, i[0]), cx.e(e, i[1]));
        (vec![dot(eps, &m(e, &a, &b), f)], vec![&eps[i[0]] * &eps[i[1]]])
    }));
    ids.push(Identity::new("counit-unital", 0, |_: &[usize]| vec![], move |_, _| {
        (vec![dot(eps, &etas[e], f)], vec![f.one()])
    }));
    // the antipode of grade φ⁻¹ acts on the C_{φ⁻¹} factor
    let (d3, d4) = (delta.clone(), delta);
    ids.push(Identity::new("antipode-left", 1, move |_: &[usize]| vec![cx.dim(e)], move |gs, i| {
        let p = gs[0];
        let inv = g.inverse(p).unwrap();
        let v = cx.e(e, i[0]);
        let x = apply_left(f, &d3(inv, p, &v), (cx.dim(inv), cx.dim(p)), cx.dim(p), |y| s.apply(inv, y, f));
        (contract_gw(mu, p, &x, f), scale(&dot(eps, &v, f), &etas[p]))
    }));
    ids.push(Identity::new("antipode-right", 1, move |_: &[usize]| vec![cx.dim(e)], move |gs, i| {
        let p = gs[0];
        let inv = g.inverse(p).unwrap();
        let v = cx.e(e, i[0]);
        let x = apply_right(f, &d4(p, inv, &v), (cx.dim(p), cx.dim(inv)), cx.dim(p), |y| s.apply(inv, y, f));
        (contract_gw(mu, p, &x, f), scale(&dot(eps, &v, f), &etas[p]))
    }));
    ids.push(Identity::new("antipode-operator", 1, shape1, move |gs, i| {
        let p = gs[0];
        let v = cx.e(p, i[0]);
        (q(g.inverse(p).unwrap(), &s.apply(p, &v, f)), s.apply(p, &q(p, &v), f))
    }));
    Ok(ids)
}

/// `μ_φ` applied to a flat element of `C_φ ⊗ C_φ`.
fn contract_gw(t: &GradewiseTensor<FieldElement>, g: usize, v: &[FieldElement], field: &Field) -> Vector {
    let d = t.dims[g];
    let mut out = zeros(field, d);
    for (ij, c) in v.iter().enumerate() {
        axpy(&mut out, c, t.fibre(g, ij / d, ij % d));
    }
    out
}

pub(crate) fn identities<'a>(law: &Law, cx: Ctx<'a>) -> Result<Vec<Identity<'a>>> {
    match *law {
        Law::TCoalgebra { counital } => t_coalgebra(cx, counital),
        Law::RbTCoalgebra => {
            let mut ids = t_coalgebra(cx, false)?;
            ids.extend(co_rota_baxter(cx)?);
            Ok(ids)
        }
        Law::SplitCoalgebra(v) => split_coalgebra(cx, v),
        Law::SemiHopf => semi_hopf(cx),
        Law::Hopf => hopf(cx),
        Law::HopfTCoalgebra => hopf_t_coalgebra(cx),
        _ => unreachable!("algebra laws are dispatched in laws.rs"),
    }
}

fn dual_kind(kind: &str) -> String {
    match kind.strip_prefix("dual-") {
        Some(k) => k.to_string(),
        None => format!("dual-{kind}"),
    }
}

fn dual_operator(name: &str) -> String {
    match name {
        "R" => "Q".into(),
        "Q" => "R".into(),
        other => other.into(),
    }
}

/// The linear dual: every structure map is replaced by its transpose. Applying
/// it twice returns the original bundle.
pub fn dualize(b: &Bundle) -> Result<Bundle> {
    b.validate()?;
    let (g, sp) = (&b.grades, &b.space);
    let mut out: Bundle = b.empty_like(&dual_kind(&b.kind));
    out.params = b.params.clone();
    out.forbidden = b.forbidden.clone();
    let mut co = CoalgebraData::default();
    for (name, fam) in &b.bilinear {
        let d = CoproductFamily::from_fn(g, sp, |p, q, k, i, j| fam.get(p, q, i, j, k).clone());
        co.coproducts.insert(dual_name(name), d);
    }
    for (name, d) in &b.coalgebra.coproducts {
        let fam = BilinearFamily::from_fn(g, sp, |p, q, i, j, k| d.get(p, q, k, i, j).clone());
        out.bilinear.insert(undual_name(name), fam);
    }
    for (name, op) in &b.operators {
        out.operators.insert(dual_operator(name), op.transpose());
    }
    co.counit = b.unit.clone();
    out.unit = b.coalgebra.counit.clone();
    for (name, t) in &b.coalgebra.gradewise_coproducts {
        co.gradewise_products.insert(undual_name(name), GradewiseTensor::from_fn(sp, |p, i, j, k| t.get(p, k, i, j).clone()));
    }
    for (name, t) in &b.coalgebra.gradewise_products {
        co.gradewise_coproducts.insert(dual_name(name), GradewiseTensor::from_fn(sp, |p, k, i, j| t.get(p, i, j, k).clone()));
    }
    co.gradewise_units = b.coalgebra.gradewise_counit.clone();
    co.gradewise_counit = b.coalgebra.gradewise_units.clone();
    if let Some(s) = &b.coalgebra.antipode {
        // the dual antipode on grade ψ is the transpose of the antipode on ψ⁻¹
        co.antipode = Some(AntipodeFamily::from_fn(g, sp, |psi, i, j| {
            s.image(g.inverse(psi).unwrap(), j)[i].clone()
        })?);
    }
    out.coalgebra = co;
    Ok(out)
}

fn coproduct_from_images(b: &Bundle, mut f: impl FnMut(usize, usize, &[FieldElement]) -> Vector) -> CoproductFamily<FieldElement> {
    let mut images = std::collections::HashMap::new();
    let (g, sp, field) = (&b.grades, &b.space, &b.field);
    CoproductFamily::from_fn(g, sp, |p, q, k, i, j| {
        let img = images
            .entry((p, q, k))
            .or_insert_with(|| f(p, q, &basis(field, sp.dim(g.product(p, q)), k)));
        img[i * sp.dim(q) + j].clone()
    })
}

fn coalgebra_out(b: &Bundle, kind: &str, families: Vec<(&str, CoproductFamily<FieldElement>)>) -> Bundle {
    let mut out: Bundle = b.empty_like(kind);
    out.operators = b.operators.clone();
    out.coalgebra.counit = b.coalgebra.counit.clone();
    for (name, d) in families {
        out.coalgebra.coproducts.insert(name.to_string(), d);
    }
    out
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

/// Splits the coproduct of a Rota-Baxter T-coalgebra.
pub fn coalg_split_from_rb(b: &Bundle, variant: Variant, mode: Mode) -> Result<Bundle> {
    require(Law::RbTCoalgebra, b, mode)?;
    let cx = Ctx::new(b);
    let d = cop(cx, "delta")?;
    let (q, gamma) = cx.operator("Q")?;
    let f = &b.field;
    let dims = |p: usize, t: usize| (cx.dim(p), cx.dim(t));
    let prec = coproduct_from_images(b, |p, t, v| {
        let x = d(p, t, v);
        let mut out = apply_right(f, &x, dims(p, t), cx.dim(t), |y| q(t, y));
        if variant == Variant::Dendriform {
            axpy(&mut out, &gamma, &x);
        }
        out
    });
    let succ = coproduct_from_images(b, |p, t, v| apply_left(f, &d(p, t, v), dims(p, t), cx.dim(p), |y| q(p, y)));
    let mut fams = vec![("delta_prec", prec), ("delta_succ", succ)];
    let kind = match variant {
        Variant::Dendriform => "dendriform-t-coalgebra",
        Variant::Tridendriform => {
            fams.push(("delta_dot", b.coproduct("delta")?.combine(b.coproduct("delta")?, |x, _| &gamma * x)));
            "tridendriform-t-coalgebra"
        }
    };
    ensure(Law::SplitCoalgebra(variant), coalgebra_out(b, kind, fams), mode)
}

/// `Δ = Δ≺ + Δ≻ (+ Δ•)`.
pub fn coalg_sum_coproduct(b: &Bundle, variant: Variant, mode: Mode) -> Result<Bundle> {
    require(Law::SplitCoalgebra(variant), b, mode)?;
    let mut sum = b.coproduct("delta_prec")?.combine(b.coproduct("delta_succ")?, |x, y| x + y);
    if variant == Variant::Tridendriform {
        sum = sum.combine(b.coproduct("delta_dot")?, |x, y| x + y);
    }
    ensure(Law::TCoalgebra { counital: false }, coalgebra_out(b, "t-coalgebra", vec![("delta", sum)]), mode)
}

/// Adds the grade-wise coproduct `Δ_φ(uᵢ) = uᵢ ⊗ uᵢ` with `ε_φ(uᵢ) = 1`.
pub fn grouplike(b: &Bundle) -> Bundle {
    let mut out = b.clone();
    let f = &b.field;
    out.kind = "semi-hopf-t-algebra".into();
    out.coalgebra.gradewise_coproducts.insert(
        DELTA_PHI.into(),
        GradewiseTensor::from_fn(&b.space, |_, k, i, j| if k == i && i == j { f.one() } else { f.zero() }),
    );
    out.coalgebra.gradewise_counit = Some(b.space.dims.iter().map(|&d| vec![f.one(); d]).collect());
    out
}

/// The antipode `S_φ(uᵢ) = uᵢ` of a grouplike bundle over a group graded
/// uniformly, with grade φ sent to φ⁻¹.
pub fn grouplike_antipode(b: &Bundle, inverse_basis: impl Fn(usize, usize) -> Vector) -> Result<AntipodeFamily<FieldElement>> {
    AntipodeFamily::from_fn(&b.grades, &b.space, |p, i, j| inverse_basis(p, i)[j].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{group_algebra_bundle, rb_to_dendriform, rb_to_tridendriform, tridend_sum_product, dend_sum_product};
    use crate::grading::GradeTable;
    use crate::laws::check;
    use crate::structures::Matrix;

    fn taft_bundle(f: &Field, diag: &[i64], g: &GradeTable) -> Bundle {
        let alg = crate::corpus::taft_sweedler().try_map(|&x| Ok(f.from_int(x))).unwrap();
        let n = diag.len();
        let data = (0..n * n).map(|x| if x / n == x % n { f.from_int(diag[x / n]) } else { f.zero() }).collect();
        group_algebra_bundle(&alg, &[Matrix { n, data }], &f.one(), g).unwrap()
    }

    #[test]
    fn dual_of_rb_algebra_is_rb_coalgebra() {
        let f = Field::Rational;
        for g in [GradeTable::trivial(), GradeTable::unit_idempotent(), GradeTable::cyclic(3)] {
            let b = taft_bundle(&f, &[0, 0, -1, -1], &g);
            assert!(check(Law::RotaBaxter, &b).unwrap().passed());
            let d = dualize(&b).unwrap();
            assert!(check(Law::RbTCoalgebra, &d).unwrap().passed());
            assert!(check(Law::TCoalgebra { counital: true }, &d).unwrap().passed());
            assert_eq!(dualize(&d).unwrap(), b);
        }
    }

    #[test]
    fn split_coproducts_dualize_split_products() {
        let f = Field::Rational;
        let b = taft_bundle(&f, &[0, 0, -1, -1], &GradeTable::unit_idempotent());
        let d = dualize(&b).unwrap();
        for v in [Variant::Dendriform, Variant::Tridendriform] {
            let split = coalg_split_from_rb(&d, v, Mode::Checked).unwrap();
            let alg = match v {
                Variant::Dendriform => rb_to_dendriform(&b, Mode::Checked).unwrap(),
                Variant::Tridendriform => rb_to_tridendriform(&b, Mode::Checked).unwrap(),
            };
            let dual = dualize(&alg).unwrap();
            assert_eq!(split.coalgebra.coproducts, dual.coalgebra.coproducts);
            let summed = coalg_sum_coproduct(&split, v, Mode::Checked).unwrap();
            let product = match v {
                Variant::Dendriform => dend_sum_product(&alg, Mode::Fast).unwrap(),
                Variant::Tridendriform => tridend_sum_product(&alg, Mode::Fast).unwrap(),
            };
            assert_eq!(summed.coproduct("delta").unwrap(), dualize(&product).unwrap().coproduct("delta").unwrap());
        }
    }

    #[test]
    fn broken_coproduct_fails_coassociativity() {
        let f = Field::Rational;
        let b = taft_bundle(&f, &[0, 0, 0, 0], &GradeTable::trivial());
        let mut d = dualize(&b).unwrap();
        d.coalgebra.coproducts.get_mut("delta").unwrap().set(0, 0, 2, 0, 2, f.from_int(2));
        let r = check(Law::TCoalgebra { counital: false }, &d).unwrap();
        assert!(!r.passed());
        assert_eq!(r.counterexample.unwrap().identity, "coassociativity");
    }

    #[test]
    fn cyclic_group_algebra_is_hopf() {
        // k[Z/3] graded trivially-by-copy over Z/2 with grouplike basis
        let f = Field::Rational;
        let n = 3;
        let table = (0..n * n * n).map(|x| {
            let (i, j, k) = (x / (n * n), (x / n) % n, x % n);
            f.from_int(((i + j) % n == k) as i64)
        });
        let alg = crate::structures::Algebra { name: "k[Z/3]".into(), dim: n, table: table.collect(), unit: Some(basis(&f, n, 0)) };
        let g = GradeTable::cyclic(2);
        let zero = Matrix::scalar(&f, n, &f.zero());
        let b = grouplike(&group_algebra_bundle(&alg, &[zero], &f.one(), &g).unwrap());
        assert!(check(Law::SemiHopf, &b).unwrap().passed());
        let mut h = b.clone();
        h.coalgebra.antipode = Some(grouplike_antipode(&b, |_, i| basis(&f, n, (n - i) % n)).unwrap());
        assert!(check(Law::Hopf, &h).unwrap().passed(), "{}", check(Law::Hopf, &h).unwrap());
        let d = dualize(&h).unwrap();
        assert!(check(Law::HopfTCoalgebra, &d).unwrap().passed(), "{}", check(Law::HopfTCoalgebra, &d).unwrap());
        let mut bad = h;
        bad.coalgebra.antipode = Some(grouplike_antipode(&b, |_, i| basis(&f, n, i)).unwrap());
        let r = check(Law::Hopf, &bad).unwrap();
        assert_eq!(r.counterexample.unwrap().identity, "antipode-left");
    }
}
