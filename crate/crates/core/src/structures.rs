//! Structure-constant containers shared by every algebraic structure.
//!
//! Basis vectors of a component are indexed from 0. An operator matrix is
//! stored row by row with row `i` holding the image of basis vector `i`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grading::{GradeTable, GradedSpace};
use crate::scalar::{Assignment, Field, FieldElement, ParamExpr};

pub type Vector = Vec<FieldElement>;

pub fn zeros(field: &Field, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn basis(field: &Field, n: usize, i: usize) -> Vector {
    let mut v = zeros(field, n);
    v[i] = field.one();
    v
}

/// `acc += c * v`.
pub fn axpy(acc: &mut [FieldElement], c: &FieldElement, v: &[FieldElement]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = &*a + &(c * x);
        }
    }
}

pub fn add(a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &FieldElement, v: &[FieldElement]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn is_zero(v: &[FieldElement]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// A family of bilinear maps `A_p ⊗ A_q → A_pq`, one tensor per grade pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearFamily<S> {
    grades: usize,
    shapes: Vec<(usize, usize, usize)>,
    tensors: Vec<Vec<S>>,
}

impl<S: Clone> BilinearFamily<S> {
    pub fn from_fn(
        g: &GradeTable,
        space: &GradedSpace,
        mut f: impl FnMut(usize, usize, usize, usize, usize) -> S,
    ) -> Self {
        let n = g.len();
        let mut shapes = Vec::with_capacity(n * n);
        let mut tensors = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                let (dp, dq, dr) = (space.dim(p), space.dim(q), space.dim(g.product(p, q)));
                let mut t = Vec::with_capacity(dp * dq * dr);
                for i in 0..dp {
                    for j in 0..dq {
                        for k in 0..dr {
                            t.push(f(p, q, i, j, k));
                        }
                    }
                }
                shapes.push((dp, dq, dr));
                tensors.push(t);
            }
        }
        BilinearFamily { grades: n, shapes, tensors }
    }

    pub fn filled(g: &GradeTable, space: &GradedSpace, value: S) -> Self {
        Self::from_fn(g, space, |_, _, _, _, _| value.clone())
    }

    pub fn shape(&self, p: usize, q: usize) -> (usize, usize, usize) {
        self.shapes[p * self.grades + q]
    }

    pub fn get(&self, p: usize, q: usize, i: usize, j: usize, k: usize) -> &S {
        let (_, dq, dr) = self.shape(p, q);
        &self.tensors[p * self.grades + q][(i * dq + j) * dr + k]
    }

    pub fn set(&mut self, p: usize, q: usize, i: usize, j: usize, k: usize, v: S) {
        let (_, dq, dr) = self.shape(p, q);
        self.tensors[p * self.grades + q][(i * dq + j) * dr + k] = v;
    }

    /// Coordinates of the product of basis vectors `i` of `A_p` and `j` of `A_q`.
    pub fn entry(&self, p: usize, q: usize, i: usize, j: usize) -> &[S] {
        let (_, dq, dr) = self.shape(p, q);
        &self.tensors[p * self.grades + q][(i * dq + j) * dr..(i * dq + j + 1) * dr]
    }

    pub fn try_map<T>(&self, mut f: impl FnMut(&S) -> Result<T>) -> Result<BilinearFamily<T>> {
        let tensors = self
            .tensors
            .iter()
            .map(|t| t.iter().map(&mut f).collect::<Result<Vec<T>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(BilinearFamily { grades: self.grades, shapes: self.shapes.clone(), tensors })
    }

    /// `(p, q, i, j, k, value)` for every entry, in index order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, usize, usize, &S)> {
        let n = self.grades;
        self.tensors.iter().enumerate().flat_map(move |(pq, t)| {
            let (_, dq, dr) = self.shapes[pq];
            t.iter().enumerate().map(move |(idx, v)| {
                (pq / n, pq % n, idx / (dq * dr), (idx / dr) % dq, idx % dr, v)
            })
        })
    }

    pub fn matches_space(&self, g: &GradeTable, space: &GradedSpace) -> bool {
        self.grades == g.len()
            && (0..g.len()).all(|p| {
                (0..g.len()).all(|q| {
                    self.shape(p, q) == (space.dim(p), space.dim(q), space.dim(g.product(p, q)))
                })
            })
    }
}

impl BilinearFamily<FieldElement> {
    pub fn zero(g: &GradeTable, space: &GradedSpace, field: &Field) -> Self {
        Self::filled(g, space, field.zero())
    }

    /// Builds a family from the product of basis vectors.
    pub fn from_products(
        g: &GradeTable,
        space: &GradedSpace,
        mut f: impl FnMut(usize, usize, usize, usize) -> Vector,
    ) -> Self {
        let mut cache: Option<(usize, usize, usize, usize, Vector)> = None;
        Self::from_fn(g, space, |p, q, i, j, k| {
            if !matches!(&cache, Some((a, b, c, d, _)) if (*a, *b, *c, *d) == (p, q, i, j)) {
                cache = Some((p, q, i, j, f(p, q, i, j)));
            }
            cache.as_ref().unwrap().4[k].clone()
        })
    }

    pub fn apply(&self, p: usize, q: usize, a: &[FieldElement], b: &[FieldElement], field: &Field) -> Vector {
        let (dp, dq, dr) = self.shape(p, q);
        let mut out = zeros(field, dr);
        for i in 0..dp {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..dq {
                if b[j].is_zero() {
                    continue;
                }
                axpy(&mut out, &(&a[i] * &b[j]), self.entry(p, q, i, j));
            }
        }
        out
    }

    pub fn combine(&self, other: &Self, f: impl Fn(&FieldElement, &FieldElement) -> FieldElement) -> Self {
        let tensors = self
            .tensors
            .iter()
            .zip(&other.tensors)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            .collect();
        BilinearFamily { grades: self.grades, shapes: self.shapes.clone(), tensors }
    }
}

/// One square matrix per grade plus a weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorFamily<S> {
    pub matrices: Vec<Vec<S>>,
    pub dims: Vec<usize>,
    pub weight: S,
}

impl<S: Clone> OperatorFamily<S> {
    pub fn from_fn(space: &GradedSpace, weight: S, mut f: impl FnMut(usize, usize, usize) -> S) -> Self {
        let matrices = space
            .dims
            .iter()
            .enumerate()
            .map(|(g, &d)| (0..d * d).map(|x| f(g, x / d, x % d)).collect())
            .collect();
        OperatorFamily { matrices, dims: space.dims.clone(), weight }
    }

    /// Coordinates of the image of basis vector `i` of grade `g`.
    pub fn image(&self, g: usize, i: usize) -> &[S] {
        let d = self.dims[g];
        &self.matrices[g][i * d..(i + 1) * d]
    }

    pub fn get(&self, g: usize, i: usize, j: usize) -> &S {
        &self.matrices[g][i * self.dims[g] + j]
    }

    pub fn try_map<T>(&self, mut f: impl FnMut(&S) -> Result<T>) -> Result<OperatorFamily<T>> {
        Ok(OperatorFamily {
            matrices: self
                .matrices
                .iter()
                .map(|m| m.iter().map(&mut f).collect::<Result<Vec<T>>>())
                .collect::<Result<Vec<_>>>()?,
            dims: self.dims.clone(),
            weight: f(&self.weight)?,
        })
    }
}

impl OperatorFamily<FieldElement> {
    pub fn scalar(space: &GradedSpace, c: &FieldElement, weight: FieldElement) -> Self {
        let zero = c.zero_like();
        Self::from_fn(space, weight, |_, i, j| if i == j { c.clone() } else { zero.clone() })
    }

    pub fn apply(&self, g: usize, v: &[FieldElement], field: &Field) -> Vector {
        let d = self.dims[g];
        let mut out = zeros(field, d);
        for (i, c) in v.iter().enumerate() {
            axpy(&mut out, c, self.image(g, i));
        }
        out
    }

    /// The same family with every matrix transposed.
    pub fn transpose(&self) -> Self {
        let matrices = self
            .matrices
            .iter()
            .zip(&self.dims)
            .map(|(m, &d)| (0..d * d).map(|x| m[(x % d) * d + x / d].clone()).collect())
            .collect();
        OperatorFamily { matrices, dims: self.dims.clone(), weight: self.weight.clone() }
    }
}

/// A family of maps `C_pq → C_p ⊗ C_q`; tensors are indexed `[k][i][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoproductFamily<S> {
    grades: usize,
    shapes: Vec<(usize, usize, usize)>,
    tensors: Vec<Vec<S>>,
}

impl<S: Clone> CoproductFamily<S> {
    pub fn from_fn(
        g: &GradeTable,
        space: &GradedSpace,
        mut f: impl FnMut(usize, usize, usize, usize, usize) -> S,
    ) -> Self {
        let n = g.len();
        let mut shapes = Vec::new();
        let mut tensors = Vec::new();
        for p in 0..n {
            for q in 0..n {
                let (dr, dp, dq) = (space.dim(g.product(p, q)), space.dim(p), space.dim(q));
                let mut t = Vec::with_capacity(dr * dp * dq);
                for k in 0..dr {
                    for i in 0..dp {
                        for j in 0..dq {
                            t.push(f(p, q, k, i, j));
                        }
                    }
                }
                shapes.push((dr, dp, dq));
                tensors.push(t);
            }
        }
        CoproductFamily { grades: n, shapes, tensors }
    }

    pub fn shape(&self, p: usize, q: usize) -> (usize, usize, usize) {
        self.shapes[p * self.grades + q]
    }

    pub fn get(&self, p: usize, q: usize, k: usize, i: usize, j: usize) -> &S {
        let (_, dp, dq) = self.shape(p, q);
        &self.tensors[p * self.grades + q][(k * dp + i) * dq + j]
    }

    pub fn set(&mut self, p: usize, q: usize, k: usize, i: usize, j: usize, v: S) {
        let (_, dp, dq) = self.shape(p, q);
        self.tensors[p * self.grades + q][(k * dp + i) * dq + j] = v;
    }

    /// Flattened `dp × dq` image of basis vector `k` of `C_pq`.
    pub fn image(&self, p: usize, q: usize, k: usize) -> &[S] {
        let (_, dp, dq) = self.shape(p, q);
        &self.tensors[p * self.grades + q][k * dp * dq..(k + 1) * dp * dq]
    }

    pub fn try_map<T>(&self, mut f: impl FnMut(&S) -> Result<T>) -> Result<CoproductFamily<T>> {
        let tensors = self
            .tensors
            .iter()
            .map(|t| t.iter().map(&mut f).collect::<Result<Vec<T>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(CoproductFamily { grades: self.grades, shapes: self.shapes.clone(), tensors })
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, usize, usize, &S)> {
        let n = self.grades;
        self.tensors.iter().enumerate().flat_map(move |(pq, t)| {
            let (_, dp, dq) = self.shapes[pq];
            t.iter().enumerate().map(move |(idx, v)| {
                (pq / n, pq % n, idx / (dp * dq), (idx / dq) % dp, idx % dq, v)
            })
        })
    }

    pub fn matches_space(&self, g: &GradeTable, space: &GradedSpace) -> bool {
        self.grades == g.len()
            && (0..g.len()).all(|p| {
                (0..g.len()).all(|q| {
                    self.shape(p, q) == (space.dim(g.product(p, q)), space.dim(p), space.dim(q))
                })
            })
    }
}

impl CoproductFamily<FieldElement> {
    pub fn apply(&self, p: usize, q: usize, v: &[FieldElement], field: &Field) -> Vector {
        let (_, dp, dq) = self.shape(p, q);
        let mut out = zeros(field, dp * dq);
        for (k, c) in v.iter().enumerate() {
            axpy(&mut out, c, self.image(p, q, k));
        }
        out
    }

    pub fn combine(&self, other: &Self, f: impl Fn(&FieldElement, &FieldElement) -> FieldElement) -> Self {
        let tensors = self
            .tensors
            .iter()
            .zip(&other.tensors)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            .collect();
        CoproductFamily { grades: self.grades, shapes: self.shapes.clone(), tensors }
    }
}

/// One `d × d × d` tensor per grade, for grade-wise products (`[i][j][k]`)
/// or grade-wise coproducts (`[k][i][j]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradewiseTensor<S> {
    pub dims: Vec<usize>,
    pub tensors: Vec<Vec<S>>,
}

impl<S: Clone> GradewiseTensor<S> {
    pub fn from_fn(space: &GradedSpace, mut f: impl FnMut(usize, usize, usize, usize) -> S) -> Self {
        let tensors = space
            .dims
            .iter()
            .enumerate()
            .map(|(g, &d)| (0..d * d * d).map(|x| f(g, x / (d * d), (x / d) % d, x % d)).collect())
            .collect();
        GradewiseTensor { dims: space.dims.clone(), tensors }
    }

    pub fn get(&self, g: usize, a: usize, b: usize, c: usize) -> &S {
        let d = self.dims[g];
        &self.tensors[g][(a * d + b) * d + c]
    }

    /// The `d × d` block for leading index `a`.
    pub fn block(&self, g: usize, a: usize) -> &[S] {
        let d = self.dims[g];
        &self.tensors[g][a * d * d..(a + 1) * d * d]
    }

    /// The length-`d` fibre for leading indices `(a, b)`.
    pub fn fibre(&self, g: usize, a: usize, b: usize) -> &[S] {
        let d = self.dims[g];
        &self.tensors[g][(a * d + b) * d..(a * d + b + 1) * d]
    }

    pub fn try_map<T>(&self, mut f: impl FnMut(&S) -> Result<T>) -> Result<GradewiseTensor<T>> {
        Ok(GradewiseTensor {
            dims: self.dims.clone(),
            tensors: self
                .tensors
                .iter()
                .map(|t| t.iter().map(&mut f).collect::<Result<Vec<T>>>())
                .collect::<Result<Vec<_>>>()?,
        })
    }
}

/// A linear map `A_φ → A_{φ⁻¹}` per grade, rows are images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntipodeFamily<S> {
    /// `(dims(φ), dims(φ⁻¹))` per grade.
    pub shapes: Vec<(usize, usize)>,
    pub matrices: Vec<Vec<S>>,
}

impl<S: Clone> AntipodeFamily<S> {
    pub fn from_fn(g: &GradeTable, space: &GradedSpace, mut f: impl FnMut(usize, usize, usize) -> S) -> Result<Self> {
        g.require_group()?;
        let mut shapes = Vec::new();
        let mut matrices = Vec::new();
        for phi in 0..g.len() {
            let inv = g.inverse(phi).unwrap();
            let (d, e) = (space.dim(phi), space.dim(inv));
            shapes.push((d, e));
            matrices.push((0..d * e).map(|x| f(phi, x / e, x % e)).collect());
        }
        Ok(AntipodeFamily { shapes, matrices })
    }

    pub fn image(&self, g: usize, i: usize) -> &[S] {
        let e = self.shapes[g].1;
        &self.matrices[g][i * e..(i + 1) * e]
    }

    pub fn try_map<T>(&self, mut f: impl FnMut(&S) -> Result<T>) -> Result<AntipodeFamily<T>> {
        Ok(AntipodeFamily {
            shapes: self.shapes.clone(),
            matrices: self
                .matrices
                .iter()
                .map(|m| m.iter().map(&mut f).collect::<Result<Vec<T>>>())
                .collect::<Result<Vec<_>>>()?,
        })
    }
}

impl AntipodeFamily<FieldElement> {
    pub fn apply(&self, g: usize, v: &[FieldElement], field: &Field) -> Vector {
        let mut out = zeros(field, self.shapes[g].1);
        for (i, c) in v.iter().enumerate() {
            axpy(&mut out, c, self.image(g, i));
        }
        out
    }
}

/// Coalgebra-side data. Cross-grade coproducts `Δ_{p,q}` and grade-wise
/// coproducts `Δ_φ` are kept in separate maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalgebraData<S> {
    pub coproducts: BTreeMap<String, CoproductFamily<S>>,
    /// Counit on the unit grade of a cross-grade coalgebra.
    pub counit: Option<Vec<S>>,
    pub gradewise_coproducts: BTreeMap<String, GradewiseTensor<S>>,
    pub gradewise_counit: Option<Vec<Vec<S>>>,
    pub gradewise_products: BTreeMap<String, GradewiseTensor<S>>,
    pub gradewise_units: Option<Vec<Vec<S>>>,
    pub antipode: Option<AntipodeFamily<S>>,
}

impl<S> Default for CoalgebraData<S> {
    fn default() -> Self {
        CoalgebraData {
            coproducts: BTreeMap::new(),
            counit: None,
            gradewise_coproducts: BTreeMap::new(),
            gradewise_counit: None,
            gradewise_products: BTreeMap::new(),
            gradewise_units: None,
            antipode: None,
        }
    }
}

/// The universal container: a graded space with named families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureBundle<S> {
    pub kind: String,
    pub note: String,
    pub field: Field,
    pub params: Vec<String>,
    pub forbidden: Vec<ParamExpr>,
    pub grades: GradeTable,
    pub space: GradedSpace,
    pub bilinear: BTreeMap<String, BilinearFamily<S>>,
    pub operators: BTreeMap<String, OperatorFamily<S>>,
    /// Unit vector in the component of the unit grade.
    pub unit: Option<Vec<S>>,
    pub coalgebra: CoalgebraData<S>,
}

pub type Bundle = StructureBundle<FieldElement>;
pub type ParamBundle = StructureBundle<ParamExpr>;

impl<S: Clone> StructureBundle<S> {
    pub fn new(kind: &str, field: Field, grades: GradeTable, space: GradedSpace) -> Self {
        StructureBundle {
            kind: kind.to_string(),
            note: String::new(),
            field,
            params: Vec::new(),
            forbidden: Vec::new(),
            grades,
            space,
            bilinear: BTreeMap::new(),
            operators: BTreeMap::new(),
            unit: None,
            coalgebra: CoalgebraData::default(),
        }
    }

    /// Same grading and field, no families.
    pub fn empty_like<T: Clone>(&self, kind: &str) -> StructureBundle<T> {
        let mut b = StructureBundle::new(kind, self.field.clone(), self.grades.clone(), self.space.clone());
        b.note = self.note.clone();
        b
    }

    pub fn family(&self, name: &str) -> Result<&BilinearFamily<S>> {
        self.bilinear.get(name).ok_or_else(|| Error::MissingFamily(name.to_string()))
    }

    pub fn operator(&self, name: &str) -> Result<&OperatorFamily<S>> {
        self.operators.get(name).ok_or_else(|| Error::MissingOperator(name.to_string()))
    }

    pub fn coproduct(&self, name: &str) -> Result<&CoproductFamily<S>> {
        self.coalgebra
            .coproducts
            .get(name)
            .ok_or_else(|| Error::Missing(format!("coproduct family `{name}`")))
    }

    pub fn with_family(mut self, name: &str, f: BilinearFamily<S>) -> Self {
        self.bilinear.insert(name.to_string(), f);
        self
    }

    pub fn with_operator(mut self, name: &str, f: OperatorFamily<S>) -> Self {
        self.operators.insert(name.to_string(), f);
        self
    }

    /// Checks every shape invariant against the grading.
    pub fn validate(&self) -> Result<()> {
        let (g, sp) = (&self.grades, &self.space);
        if sp.dims.len() != g.len() {
            return Err(Error::Shape(format!("{} dims for {} grades", sp.dims.len(), g.len())));
        }
        for (name, f) in &self.bilinear {
            if !f.matches_space(g, sp) {
                return Err(Error::Shape(format!("bilinear family `{name}`")));
            }
        }
        for (name, op) in &self.operators {
            if op.dims != sp.dims {
                return Err(Error::Shape(format!("operator family `{name}`")));
            }
        }
        if let Some(u) = &self.unit {
            let e = g.unit().ok_or(Error::Grading("monoid"))?;
            if u.len() != sp.dim(e) {
                return Err(Error::Shape("unit vector".into()));
            }
        }
        let c = &self.coalgebra;
        for (name, f) in &c.coproducts {
            if !f.matches_space(g, sp) {
                return Err(Error::Shape(format!("coproduct family `{name}`")));
            }
        }
        if let Some(u) = &c.counit {
            let e = g.unit().ok_or(Error::Grading("monoid"))?;
            if u.len() != sp.dim(e) {
                return Err(Error::Shape("counit".into()));
            }
        }
        for (name, t) in c.gradewise_coproducts.iter().chain(&c.gradewise_products) {
            if t.dims != sp.dims {
                return Err(Error::Shape(format!("grade-wise family `{name}`")));
            }
        }
        for (what, vs) in [("grade-wise counit", &c.gradewise_counit), ("grade-wise unit", &c.gradewise_units)] {
            if let Some(vs) = vs {
                if vs.len() != g.len() || vs.iter().zip(&sp.dims).any(|(v, &d)| v.len() != d) {
                    return Err(Error::Shape(what.into()));
                }
            }
        }
        if let Some(s) = &c.antipode {
            g.require_group()?;
            for phi in 0..g.len() {
                if s.shapes[phi] != (sp.dim(phi), sp.dim(g.inverse(phi).unwrap())) {
                    return Err(Error::Shape("antipode".into()));
                }
            }
        }
        Ok(())
    }

    pub fn try_map<T: Clone>(&self, mut f: impl FnMut(&S) -> Result<T>) -> Result<StructureBundle<T>> {
        let mut out: StructureBundle<T> = self.empty_like(&self.kind);
        out.params = self.params.clone();
        out.forbidden = self.forbidden.clone();
        for (k, v) in &self.bilinear {
            out.bilinear.insert(k.clone(), v.try_map(&mut f)?);
        }
        for (k, v) in &self.operators {
            out.operators.insert(k.clone(), v.try_map(&mut f)?);
        }
        out.unit = self.unit.as_ref().map(|u| u.iter().map(&mut f).collect()).transpose()?;
        let c = &self.coalgebra;
        let oc = &mut out.coalgebra;
        for (k, v) in &c.coproducts {
            oc.coproducts.insert(k.clone(), v.try_map(&mut f)?);
        }
        oc.counit = c.counit.as_ref().map(|u| u.iter().map(&mut f).collect()).transpose()?;
        for (k, v) in &c.gradewise_coproducts {
            oc.gradewise_coproducts.insert(k.clone(), v.try_map(&mut f)?);
        }
        for (k, v) in &c.gradewise_products {
            oc.gradewise_products.insert(k.clone(), v.try_map(&mut f)?);
        }
        let map_vv = |vv: &Option<Vec<Vec<S>>>, f: &mut dyn FnMut(&S) -> Result<T>| -> Result<Option<Vec<Vec<T>>>> {
            vv.as_ref()
                .map(|vs| vs.iter().map(|v| v.iter().map(&mut *f).collect()).collect())
                .transpose()
        };
        oc.gradewise_counit = map_vv(&c.gradewise_counit, &mut f)?;
        oc.gradewise_units = map_vv(&c.gradewise_units, &mut f)?;
        oc.antipode = c.antipode.as_ref().map(|s| s.try_map(&mut f)).transpose()?;
        Ok(out)
    }
}

impl ParamBundle {
    pub fn is_parametric(&self) -> bool {
        !self.params.is_empty()
    }

    pub fn specialize(&self, assignment: &Assignment) -> Result<Bundle> {
        let field = self.field.clone();
        let mut b = self.try_map(|e| e.eval(&field, assignment))?;
        b.params.clear();
        b.forbidden.clear();
        Ok(b)
    }

    /// Fixes some parameters, keeping the others symbolic. Declared loci
    /// that become the constant zero are rejected.
    pub fn partially_specialize(&self, assignment: &Assignment) -> Result<ParamBundle> {
        let mut b = self.try_map(|e| Ok(e.substitute(assignment)))?;
        b.params.retain(|p| !assignment.contains_key(p));
        let mut forbidden = Vec::new();
        for f in &self.forbidden {
            let g = f.substitute(assignment);
            if g.is_zero() {
                return Err(Error::DivisionByZero(f.to_string()));
            }
            if g.as_const().is_none() {
                forbidden.push(g);
            }
        }
        b.forbidden = forbidden;
        Ok(b)
    }

    /// Specializes a bundle without parameters.
    pub fn concrete(&self) -> Result<Bundle> {
        if let Some(p) = self.params.first() {
            return Err(Error::Parametric(p.clone()));
        }
        self.specialize(&Assignment::new())
    }

    /// Re-targets the scalar field, e.g. to reduce a rational bundle mod p.
    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    /// Every denominator appearing in an entry, plus the declared loci.
    pub fn all_forbidden(&self) -> Vec<ParamExpr> {
        let mut out = self.forbidden.clone();
        let _ = self.try_map(|e| {
            for d in e.denominators() {
                if !out.contains(&d) {
                    out.push(d);
                }
            }
            Ok(())
        });
        out
    }
}

impl Bundle {
    pub fn to_param(&self) -> ParamBundle {
        self.try_map(|e| Ok(ParamExpr::from_element(e))).expect("infallible")
    }
}

/// An ungraded algebra given by structure constants `[i][j][k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra<S> {
    pub name: String,
    pub dim: usize,
    pub table: Vec<S>,
    pub unit: Option<Vec<S>>,
}

impl<S: Clone> Algebra<S> {
    pub fn product(&self, i: usize, j: usize) -> &[S] {
        let n = self.dim;
        &self.table[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn try_map<T>(&self, mut f: impl FnMut(&S) -> Result<T>) -> Result<Algebra<T>> {
        Ok(Algebra {
            name: self.name.clone(),
            dim: self.dim,
            table: self.table.iter().map(&mut f).collect::<Result<_>>()?,
            unit: self.unit.as_ref().map(|u| u.iter().map(&mut f).collect()).transpose()?,
        })
    }
}

impl Algebra<FieldElement> {
    pub fn mul(&self, a: &[FieldElement], b: &[FieldElement], field: &Field) -> Vector {
        let mut out = zeros(field, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                if !a[i].is_zero() && !b[j].is_zero() {
                    axpy(&mut out, &(&a[i] * &b[j]), self.product(i, j));
                }
            }
        }
        out
    }

    /// The same algebra viewed over the trivial grading.
    pub fn to_bundle(&self, field: &Field) -> Bundle {
        let g = GradeTable::trivial();
        let sp = GradedSpace::uniform(&g, self.dim);
        let mul = BilinearFamily::from_fn(&g, &sp, |_, _, i, j, k| self.product(i, j)[k].clone());
        let mut b = Bundle::new("t-algebra", field.clone(), g, sp).with_family("mul", mul);
        b.unit = self.unit.clone();
        b
    }
}

/// A square matrix stored row by row, rows being images of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<S> {
    pub n: usize,
    pub data: Vec<S>,
}

impl<S: Clone> Matrix<S> {
    pub fn image(&self, i: usize) -> &[S] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn try_map<T>(&self, f: impl FnMut(&S) -> Result<T>) -> Result<Matrix<T>> {
        Ok(Matrix { n: self.n, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }
}

impl Matrix<FieldElement> {
    pub fn scalar(field: &Field, n: usize, c: &FieldElement) -> Self {
        Matrix { n, data: (0..n * n).map(|x| if x / n == x % n { c.clone() } else { field.zero() }).collect() }
    }

    pub fn apply(&self, v: &[FieldElement], field: &Field) -> Vector {
        let mut out = zeros(field, self.n);
        for (i, c) in v.iter().enumerate() {
            axpy(&mut out, c, self.image(i));
        }
        out
    }

    /// `−λ·id − M`.
    pub fn tilde(&self, weight: &FieldElement) -> Self {
        let n = self.n;
        Matrix {
            n,
            data: self
                .data
                .iter()
                .enumerate()
                .map(|(x, m)| if x / n == x % n { -weight - m.clone() } else { -m })
                .collect(),
        }
    }

    pub fn format(&self) -> String {
        let rows: Vec<String> = (0..self.n)
            .map(|i| self.image(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        format!("[{}]", rows.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_iteration_matches_get() {
        let g = GradeTable::unit_idempotent();
        let sp = GradedSpace { dims: vec![2, 3] };
        let f = BilinearFamily::from_fn(&g, &sp, |p, q, i, j, k| (p, q, i, j, k));
        for (p, q, i, j, k, v) in f.entries() {
            assert_eq!(*v, (p, q, i, j, k));
            assert_eq!(f.get(p, q, i, j, k), v);
        }
        assert_eq!(f.entries().count(), 2 * 2 * 2 + 2 * 3 * 3 + 3 * 2 * 3 + 3 * 3 * 3);
        let d = CoproductFamily::from_fn(&g, &sp, |p, q, k, i, j| (p, q, k, i, j));
        for (p, q, k, i, j, v) in d.entries() {
            assert_eq!(*v, (p, q, k, i, j));
        }
    }

    #[test]
    fn transpose_and_tilde() {
        let f = Field::Rational;
        let sp = GradedSpace { dims: vec![2] };
        let op = OperatorFamily::from_fn(&sp, f.one(), |_, i, j| f.from_int((2 * i + j) as i64));
        let t = op.transpose();
        assert_eq!(t.get(0, 0, 1), op.get(0, 1, 0));
        assert_eq!(t.transpose(), op);
        let m = Matrix { n: 2, data: vec![f.from_int(1), f.from_int(2), f.from_int(3), f.from_int(4)] };
        assert_eq!(m.tilde(&f.from_int(5)).tilde(&f.from_int(5)), m);
    }

    #[test]
    fn zero_dimensional_components_are_allowed() {
        let g = GradeTable::unit_idempotent();
        let sp = GradedSpace { dims: vec![0, 0] };
        let b = Bundle::new("t-algebra", Field::Rational, g.clone(), sp.clone())
            .with_family("mul", BilinearFamily::zero(&g, &sp, &Field::Rational));
        b.validate().unwrap();
    }
}
