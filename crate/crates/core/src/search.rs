//! Exhaustive enumeration of Rota-Baxter operators and pairs on small
//! ungraded algebras over prime fields.
//!
//! Candidates are matrices over `F_p` numbered in row-major lexicographic
//! order (entry `(0,0)` is the most significant digit). The inner kernel runs
//! on raw residues; every emitted solution is re-verified single-threaded by
//! the general law checker.

use rayon::prelude::*;

use crate::constructions::{check_rb_pair, RBPair};
use crate::error::{Error, Result};
use crate::grading::{GradeTable, GradedSpace};
use crate::laws::{check, Law};
use crate::scalar::{Assignment, Field, FieldElement, ParamExpr, WEIGHT};
use crate::structures::{Algebra, Matrix, OperatorFamily};

/// Largest candidate count searched without refusal.
pub const DEFAULT_BUDGET: u64 = 1 << 22;

struct Kernel {
    n: usize,
    p: u64,
    table: Vec<u64>,
    w: u64,
}

impl Kernel {
    fn new(alg: &Algebra<FieldElement>, weight: &FieldElement) -> Result<Kernel> {
        let p = weight
            .field()
            .modulus()
            .ok_or_else(|| Error::Usage("search needs a prime field".into()))?;
        let table = alg
            .table
            .iter()
            .map(|x| x.as_residue().ok_or_else(|| Error::Usage("algebra and weight over different fields".into())))
            .collect::<Result<_>>()?;
        Ok(Kernel { n: alg.dim, p, table, w: weight.as_residue().expect("prime field") })
    }

    fn decode(&self, mut idx: u64, m: &mut [u64]) {
        for x in m.iter_mut().rev() {
            *x = idx % self.p;
            idx /= self.p;
        }
    }

    fn apply(&self, m: &[u64], v: &[u64], out: &mut [u64]) {
        let n = self.n;
        out.fill(0);
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                for k in 0..n {
                    out[k] = (out[k] + c * m[i * n + k]) % self.p;
                }
            }
        }
    }

    fn mul(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let n = self.n;
        out.fill(0);
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                let c = a[i] * b[j] % self.p;
                if c != 0 {
                    let row = &self.table[(i * n + j) * n..(i * n + j + 1) * n];
                    for k in 0..n {
                        out[k] = (out[k] + c * row[k]) % self.p;
                    }
                }
            }
        }
    }

    /// `x(h)y(g) = z(x(h)g + h y(g) + λhg)` on all basis pairs.
    fn mixed(&self, x: &[u64], y: &[u64], z: &[u64], s: &mut Scratch) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let xh = &x[i * n..(i + 1) * n];
                let yg = &y[j * n..(j + 1) * n];
                self.mul(xh, yg, &mut s.lhs);
                s.inner.fill(0);
                s.e1.fill(0);
                s.e2.fill(0);
                s.e1[i] = 1;
                s.e2[j] = 1;
                self.mul(xh, &s.e2, &mut s.t);
                add_into(&mut s.inner, &s.t, 1, self.p);
                self.mul(&s.e1, yg, &mut s.t);
                add_into(&mut s.inner, &s.t, 1, self.p);
                add_into(&mut s.inner, &self.table[(i * n + j) * n..(i * n + j + 1) * n], self.w, self.p);
                self.apply(z, &s.inner, &mut s.t);
                if s.t != s.lhs {
                    return false;
                }
            }
        }
        true
    }
}

fn add_into(acc: &mut [u64], v: &[u64], c: u64, p: u64) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a = (*a + c * x) % p;
    }
}

struct Scratch {
    lhs: Vec<u64>,
    inner: Vec<u64>,
    t: Vec<u64>,
    e1: Vec<u64>,
    e2: Vec<u64>,
}

impl Scratch {
    fn new(n: usize) -> Scratch {
        Scratch { lhs: vec![0; n], inner: vec![0; n], t: vec![0; n], e1: vec![0; n], e2: vec![0; n] }
    }
}

/// `p^(n²)`, or `None` on overflow.
pub fn candidate_count(p: u64, n: usize) -> Option<u64> {
    p.checked_pow(u32::try_from(n * n).ok()?)
}

fn to_matrix(field: &Field, n: usize, m: &[u64]) -> Matrix<FieldElement> {
    Matrix { n, data: m.iter().map(|&x| field.from_int(x as i64)).collect() }
}

fn residues(m: &Matrix<FieldElement>) -> Vec<u64> {
    m.data.iter().map(|x| x.as_residue().expect("prime field")).collect()
}

/// The algebra with `m` as operator, over the trivial grading.
pub fn classical_bundle(alg: &Algebra<FieldElement>, m: &Matrix<FieldElement>, weight: &FieldElement) -> crate::structures::Bundle {
    let mut b = alg.to_bundle(&weight.field());
    b.kind = "rota-baxter-t-algebra".into();
    let sp = GradedSpace { dims: vec![alg.dim] };
    b.with_operator("R", OperatorFamily::from_fn(&sp, weight.clone(), |_, i, j| m.image(i)[j].clone()))
}

/// Every matrix satisfying the Rota-Baxter identity of the given weight on all
/// basis pairs, in row-major lexicographic order.
pub fn enumerate_rb_operators(alg: &Algebra<FieldElement>, weight: &FieldElement, budget: u64) -> Result<Vec<Matrix<FieldElement>>> {
    let k = Kernel::new(alg, weight)?;
    let n = k.n;
    let total = candidate_count(k.p, n)
        .filter(|&c| c <= budget)
        .ok_or_else(|| Error::Budget(format!("{}^{} (budget {budget})", k.p, n * n)))?;
    let mut found: Vec<u64> = (0..total)
        .into_par_iter()
        .map_init(
            || (vec![0u64; n * n], Scratch::new(n)),
            |(m, s), idx| {
                k.decode(idx, m);
                k.mixed(m, m, m, s).then_some(idx)
            },
        )
        .flatten()
        .collect();
    found.sort_unstable();
    let field = weight.field();
    let mut out = Vec::with_capacity(found.len());
    let mut m = vec![0u64; n * n];
    for idx in found {
        k.decode(idx, &mut m);
        let mat = to_matrix(&field, n, &m);
        let r = check(Law::RotaBaxter, &classical_bundle(alg, &mat, weight))?;
        if !r.passed() {
            return Err(Error::Postcondition(Box::new(r)));
        }
        out.push(mat);
    }
    Ok(out)
}

/// Ordered index pairs `(i, j)` into `candidates` forming Rota-Baxter pairs.
/// Candidates are assumed to be Rota-Baxter operators themselves; the
/// re-verification pass checks all four identities.
pub fn enumerate_rb_pairs(
    alg: &Algebra<FieldElement>,
    weight: &FieldElement,
    candidates: &[Matrix<FieldElement>],
) -> Result<Vec<(usize, usize)>> {
    let k = Kernel::new(alg, weight)?;
    let n = k.n;
    let raw: Vec<Vec<u64>> = candidates.iter().map(residues).collect();
    let m = raw.len();
    let mut found: Vec<(usize, usize)> = (0..m * m)
        .into_par_iter()
        .map_init(
            || Scratch::new(n),
            |s, x| {
                let (i, j) = (x / m, x % m);
                let (r, rp) = (&raw[i], &raw[j]);
                (k.mixed(r, rp, rp, s) && k.mixed(rp, r, rp, s)).then_some((i, j))
            },
        )
        .flatten()
        .collect();
    found.sort_unstable();
    for &(i, j) in &found {
        let pair = RBPair { r: candidates[i].clone(), r_prime: candidates[j].clone(), weight: weight.clone() };
        let r = check_rb_pair(&pair, alg);
        if !r.passed() {
            return Err(Error::Postcondition(Box::new(r)));
        }
    }
    Ok(found)
}

/// True when `M ↦ −λI − M` maps the set onto itself.
pub fn tilde_closed(ops: &[Matrix<FieldElement>], weight: &FieldElement) -> bool {
    let set: std::collections::BTreeSet<&Matrix<FieldElement>> = ops.iter().collect();
    ops.iter().all(|m| set.contains(&m.tilde(weight)))
}

/// A parametric operator: images of the basis vectors as expressions in the
/// weight and free parameters.
#[derive(Clone, Debug)]
pub struct OperatorFamilyExpr {
    pub n: usize,
    pub entries: Vec<ParamExpr>,
    pub params: Vec<String>,
    pub forbidden: Vec<ParamExpr>,
}

impl OperatorFamilyExpr {
    /// The matrix at one assignment (which must include the weight).
    pub fn at(&self, field: &Field, a: &Assignment) -> Result<Matrix<FieldElement>> {
        for f in self.all_forbidden() {
            if f.eval(field, a)?.is_zero() {
                return Err(Error::DivisionByZero(f.to_string()));
            }
        }
        Ok(Matrix { n: self.n, data: self.entries.iter().map(|e| e.eval(field, a)).collect::<Result<_>>()? })
    }

    pub fn all_forbidden(&self) -> Vec<ParamExpr> {
        let mut out = self.forbidden.clone();
        for e in &self.entries {
            out.extend(e.denominators());
        }
        out
    }

    /// All distinct matrices over a prime field at a fixed weight, one per
    /// admissible assignment of the free parameters.
    pub fn specializations(&self, weight: &FieldElement) -> Result<Vec<Matrix<FieldElement>>> {
        let field = weight.field();
        let elems = field.elements().ok_or_else(|| Error::Usage("specializations need a prime field".into()))?;
        let bounds = vec![elems.len(); self.params.len()];
        let mut out = Vec::new();
        for t in crate::grading::tuples(&bounds) {
            let mut a: Assignment = self.params.iter().zip(&t).map(|(p, &i)| (p.clone(), elems[i].clone())).collect();
            a.insert(WEIGHT.into(), weight.clone());
            match self.at(&field, &a) {
                Ok(m) => out.push(m),
                Err(Error::DivisionByZero(_)) => {}
                Err(e) => return Err(e),
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct FamilyMatch {
    pub id: String,
    pub specializations: usize,
    pub found: usize,
    pub missing: Vec<Matrix<FieldElement>>,
}

impl FamilyMatch {
    pub fn complete(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Matches search output against named families. Returns per-family results
/// and the indices of solutions no family produces.
pub fn match_families(
    ops: &[Matrix<FieldElement>],
    weight: &FieldElement,
    families: &[(String, OperatorFamilyExpr)],
) -> Result<(Vec<FamilyMatch>, Vec<usize>)> {
    let set: std::collections::BTreeSet<&Matrix<FieldElement>> = ops.iter().collect();
    let mut covered = std::collections::BTreeSet::new();
    let mut matches = Vec::new();
    for (id, fam) in families {
        let specs = fam.specializations(weight)?;
        let mut missing = Vec::new();
        for m in &specs {
            if set.contains(m) {
                covered.insert(m.clone());
            } else {
                missing.push(m.clone());
            }
        }
        matches.push(FamilyMatch { id: id.clone(), specializations: specs.len(), found: specs.len() - missing.len(), missing });
    }
    let extras = ops.iter().enumerate().filter(|(_, m)| !covered.contains(*m)).map(|(i, _)| i).collect();
    Ok((matches, extras))
}

/// Convenience: all operators as trivially graded bundles, in output order.
pub fn as_bundles(alg: &Algebra<FieldElement>, ops: &[Matrix<FieldElement>], weight: &FieldElement) -> Vec<crate::structures::Bundle> {
    ops.iter().map(|m| classical_bundle(alg, m, weight)).collect()
}

/// The same bundles lifted to a grading with one copy of the operator per grade.
pub fn lifted_bundles(
    alg: &Algebra<FieldElement>,
    ops: &[Matrix<FieldElement>],
    weight: &FieldElement,
    g: &GradeTable,
) -> Result<Vec<crate::structures::Bundle>> {
    ops.iter()
        .map(|m| crate::constructions::group_algebra_bundle(alg, std::slice::from_ref(m), weight, g))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn alg(f: &Field, a: Algebra<i64>) -> Algebra<FieldElement> {
        a.try_map(|&x| Ok(f.from_int(x))).unwrap()
    }

    /// Second enumeration: column-major digit order, opposite basis-pair
    /// order, field-element arithmetic.
    fn swapped_oracle(alg: &Algebra<FieldElement>, w: &FieldElement) -> Vec<Matrix<FieldElement>> {
        let f = w.field();
        let p = f.modulus().unwrap();
        let n = alg.dim;
        let elems = f.elements().unwrap();
        let mut out = Vec::new();
        for mut idx in 0..p.pow((n * n) as u32) {
            let mut data = vec![f.zero(); n * n];
            for col in 0..n {
                for row in 0..n {
                    data[row * n + col] = elems[(idx % p) as usize].clone();
                    idx /= p;
                }
            }
            let m = Matrix { n, data };
            let e = |i: usize| crate::structures::basis(&f, n, i);
            let ok = (0..n).rev().all(|j| {
                (0..n).rev().all(|i| {
                    let (ri, rj) = (m.apply(&e(i), &f), m.apply(&e(j), &f));
                    let lhs = alg.mul(&ri, &rj, &f);
                    let mut inner = crate::structures::add(&alg.mul(&e(i), &rj, &f), &alg.mul(&ri, &e(j), &f));
                    inner = crate::structures::add(&inner, &crate::structures::scale(w, &alg.mul(&e(i), &e(j), &f)));
                    lhs == m.apply(&inner, &f)
                })
            });
            if ok {
                out.push(m);
            }
        }
        out.sort_by_key(|m| residues(m));
        out
    }

    #[test]
    fn matches_swapped_order_oracle() {
        for (p, a) in [(2, corpus::two_dim()), (3, corpus::two_dim()), (2, corpus::three_dim())] {
            let f = Field::prime(p).unwrap();
            let a = alg(&f, a);
            for w in [f.one(), f.zero()] {
                let fast = enumerate_rb_operators(&a, &w, DEFAULT_BUDGET).unwrap();
                assert_eq!(fast, swapped_oracle(&a, &w), "p={p} dim={} w={w}", a.dim);
            }
        }
    }

    #[test]
    fn zero_and_minus_weight_identity_always_present() {
        let f = Field::prime(5).unwrap();
        let a = alg(&f, corpus::two_dim());
        for w in [f.one(), f.from_int(3)] {
            let ops = enumerate_rb_operators(&a, &w, DEFAULT_BUDGET).unwrap();
            assert!(ops.contains(&Matrix::scalar(&f, 2, &f.zero())));
            assert!(ops.contains(&Matrix::scalar(&f, 2, &-&w)));
            assert!(tilde_closed(&ops, &w));
            assert!(ops.windows(2).all(|x| residues(&x[0]) < residues(&x[1])));
        }
    }

    #[test]
    fn budget_refusal_names_candidate_count() {
        let f = Field::prime(3).unwrap();
        let a = alg(&f, corpus::taft_sweedler());
        let e = enumerate_rb_operators(&a, &f.one(), DEFAULT_BUDGET).unwrap_err();
        assert!(e.to_string().contains("3^16"), "{e}");
    }

    #[test]
    fn pairs_include_diagonal() {
        let f = Field::prime(3).unwrap();
        let a = alg(&f, corpus::two_dim());
        let w = f.one();
        let ops = enumerate_rb_operators(&a, &w, DEFAULT_BUDGET).unwrap();
        let pairs = enumerate_rb_pairs(&a, &w, &ops).unwrap();
        for i in 0..ops.len() {
            assert!(pairs.contains(&(i, i)));
        }
    }

    #[test]
    fn family_specializations_skip_forbidden_points() {
        let f = Field::prime(3).unwrap();
        // R(u1) = p·u1, R(u2) = (1/p)·u2: forbidden at p = 0
        let fam = OperatorFamilyExpr {
            n: 2,
            entries: vec![
                ParamExpr::param("p"),
                ParamExpr::zero(),
                ParamExpr::zero(),
                ParamExpr::int(1).div(ParamExpr::param("p")),
            ],
            params: vec!["p".into()],
            forbidden: vec![],
        };
        assert_eq!(fam.specializations(&f.one()).unwrap().len(), 2);
    }
}
