//! Finite grading semigroups given by Cayley tables.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Semigroup,
    Monoid,
    Group,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: Kind,
    pub commutative: bool,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            Kind::Semigroup => "semigroup",
            Kind::Monoid => "monoid",
            Kind::Group => "group",
        };
        if self.commutative {
            write!(f, "commutative {kind}")
        } else {
            write!(f, "non-commutative {kind}")
        }
    }
}

/// A validated Cayley table. Flags are always derived from the table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradeTable {
    names: Vec<String>,
    table: Vec<usize>,
    unit: Option<usize>,
    inverses: Option<Vec<usize>>,
    commutative: bool,
}

impl GradeTable {
    pub fn new(names: Vec<String>, rows: Vec<Vec<usize>>) -> Result<GradeTable> {
        let n = names.len();
        if n == 0 {
            return Err(Error::GradeTable("empty grade set".into()));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::GradeTable(format!("duplicate grade name `{a}`")));
            }
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::GradeTable(format!("table must be {n}x{n}")));
        }
        if let Some(&bad) = rows.iter().flatten().find(|&&x| x >= n) {
            return Err(Error::GradeTable(format!("entry {bad} out of range")));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let at = |a: usize, b: usize| table[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::NonAssociative {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            c: names[c].clone(),
                        });
                    }
                }
            }
        }
        let unit = (0..n).find(|&e| (0..n).all(|a| at(e, a) == a && at(a, e) == a));
        let inverses = unit.and_then(|e| {
            (0..n)
                .map(|a| (0..n).find(|&b| at(a, b) == e && at(b, a) == e))
                .collect::<Option<Vec<_>>>()
        });
        let commutative = (0..n).all(|a| (0..n).all(|b| at(a, b) == at(b, a)));
        Ok(GradeTable { names, table, unit, inverses, commutative })
    }

    pub fn trivial() -> GradeTable {
        GradeTable::new(vec!["1".into()], vec![vec![0]]).unwrap()
    }

    /// The monoid {1, q} with q² = q.
    pub fn unit_idempotent() -> GradeTable {
        GradeTable::new(vec!["1".into(), "q".into()], vec![vec![0, 1], vec![1, 1]]).unwrap()
    }

    /// Z/n with grades named `0..n`.
    pub fn cyclic(n: usize) -> GradeTable {
        let names = (0..n).map(|i| i.to_string()).collect();
        let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GradeTable::new(names, rows).unwrap()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn product(&self, p: usize, q: usize) -> usize {
        self.table[p * self.len() + q]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.len()).map(|r| r.to_vec()).collect()
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn inverse(&self, g: usize) -> Option<usize> {
        self.inverses.as_ref().map(|v| v[g])
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn classify(&self) -> Classification {
        let kind = if self.inverses.is_some() {
            Kind::Group
        } else if self.unit.is_some() {
            Kind::Monoid
        } else {
            Kind::Semigroup
        };
        Classification { kind, commutative: self.commutative }
    }

    pub fn require_commutative(&self) -> Result<()> {
        for p in 0..self.len() {
            for q in 0..self.len() {
                if self.product(p, q) != self.product(q, p) {
                    return Err(Error::NonCommutativeGrading {
                        p: self.names[p].clone(),
                        q: self.names[q].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn require_unit(&self) -> Result<usize> {
        self.unit.ok_or(Error::Grading("monoid"))
    }

    pub fn require_group(&self) -> Result<()> {
        self.inverses.as_ref().map(|_| ()).ok_or(Error::Grading("group"))
    }

    /// All index tuples of the given length in lexicographic order.
    pub fn tuples(&self, arity: usize) -> Vec<Vec<usize>> {
        tuples(&vec![self.len(); arity])
    }
}

/// Lexicographic enumeration of the box `0..bounds[0] × 0..bounds[1] × ...`.
pub fn tuples(bounds: &[usize]) -> Vec<Vec<usize>> {
    if bounds.iter().any(|&b| b == 0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0; bounds.len()];
    loop {
        out.push(cur.clone());
        let mut i = bounds.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Dimension of every homogeneous component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    pub dims: Vec<usize>,
}

impl GradedSpace {
    pub fn uniform(grades: &GradeTable, dim: usize) -> GradedSpace {
        GradedSpace { dims: vec![dim; grades.len()] }
    }

    pub fn dim(&self, g: usize) -> usize {
        self.dims[g]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s3() -> GradeTable {
        // permutations of three points, composed left to right
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let idx = |p: [usize; 3]| perms.iter().position(|&x| x == p).unwrap();
        let rows = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([b[a[0]], b[a[1]], b[a[2]]])).collect())
            .collect();
        GradeTable::new((0..6).map(|i| format!("s{i}")).collect(), rows).unwrap()
    }

    #[test]
    fn unit_idempotent_monoid() {
        let g = GradeTable::unit_idempotent();
        let c = g.classify();
        assert_eq!(c.kind, Kind::Monoid);
        assert!(c.commutative);
        assert_eq!(g.product(1, 1), 1);
        assert_eq!(g.product(0, 1), 1);
    }

    #[test]
    fn cyclic_group() {
        let g = GradeTable::cyclic(2);
        assert_eq!(g.classify(), Classification { kind: Kind::Group, commutative: true });
        assert_eq!(g.product(1, 1), 0);
        assert_eq!(GradeTable::trivial().classify().kind, Kind::Group);
    }

    #[test]
    fn symmetric_group_is_noncommutative() {
        assert_eq!(s3().classify(), Classification { kind: Kind::Group, commutative: false });
        assert!(s3().require_commutative().is_err());
    }

    #[test]
    fn rejects_nonassociative_table() {
        // t(0,t(1,1)) = t(0,0) = 1 but t(t(0,1),1) = t(0,1) = 0
        let err = GradeTable::new(vec!["a".into(), "b".into()], vec![vec![1, 0], vec![0, 0]]).unwrap_err();
        assert!(matches!(err, Error::NonAssociative { .. }), "{err}");
        assert!(GradeTable::new(vec!["a".into()], vec![vec![3]]).is_err());
    }

    #[test]
    fn semigroup_without_unit() {
        // left-zero band
        let g = GradeTable::new(vec!["a".into(), "b".into()], vec![vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(g.classify(), Classification { kind: Kind::Semigroup, commutative: false });
    }

    proptest! {
        #[test]
        fn random_tables_validate_consistently(rows in proptest::collection::vec(proptest::collection::vec(0usize..3, 3), 3)) {
            let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
            if let Ok(g) = GradeTable::new(names, rows) {
                for p in 0..3 { for q in 0..3 { for r in 0..3 {
                    prop_assert_eq!(g.product(g.product(p, q), r), g.product(p, g.product(q, r)));
                }}}
                let c = g.classify();
                prop_assert_eq!(c, g.classify());
                prop_assert_eq!(c.commutative, g.require_commutative().is_ok());
                if c.kind == Kind::Group { prop_assert!(g.unit().is_some()); }
            }
        }
    }
}
