use proptest::prelude::*;

use tgraded::coalgebra::dualize;
use tgraded::constructions::{group_algebra_bundle, tilde_bundle, Mode};
use tgraded::corpus;
use tgraded::format;
use tgraded::grading::{GradeTable, GradedSpace};
use tgraded::laws::{check, Law};
use tgraded::scalar::{Assignment, Field, FieldElement, ParamExpr, WEIGHT};
use tgraded::structures::{BilinearFamily, Bundle, Matrix, OperatorFamily, ParamBundle};

fn grading(i: usize) -> GradeTable {
    match i {
        0 => GradeTable::trivial(),
        1 => GradeTable::unit_idempotent(),
        2 => GradeTable::cyclic(2),
        _ => GradeTable::cyclic(3),
    }
}

/// Cycles through `pool`, so one drawn vector feeds any shape.
struct Draw<'a, T> {
    pool: &'a [T],
    at: usize,
}

impl<T: Clone> Draw<'_, T> {
    fn next(&mut self) -> T {
        let x = self.pool[self.at % self.pool.len()].clone();
        self.at += 1;
        x
    }
}

fn expr(code: i64) -> ParamExpr {
    let c = ParamExpr::int(code % 3);
    match code.rem_euclid(5) {
        0 | 1 => c,
        2 => c * ParamExpr::weight(),
        3 => c + ParamExpr::param("t"),
        _ => ParamExpr::weight() * ParamExpr::param("t") - c,
    }
}

fn param_bundle(g: usize, dims: &[usize], codes: &[i64], unit: bool) -> ParamBundle {
    let grades = grading(g);
    let sp = GradedSpace { dims: (0..grades.len()).map(|i| dims[i % dims.len()]).collect() };
    let mut d = Draw { pool: codes, at: 0 };
    let mul = BilinearFamily::from_fn(&grades, &sp, |_, _, _, _, _| expr(d.next()));
    let op = OperatorFamily::from_fn(&sp, ParamExpr::weight(), |_, _, _| expr(d.next()));
    let mut b = ParamBundle::new("rota-baxter-t-algebra", Field::Rational, grades.clone(), sp.clone())
        .with_family("mul", mul)
        .with_operator("R", op);
    b.params = vec![WEIGHT.to_string(), "t".to_string()];
    if unit {
        if let Some(e) = grades.unit() {
            b.unit = Some((0..sp.dims[e]).map(|_| expr(d.next())).collect());
        }
    }
    b
}

/// `A[π]` over F3 with an arbitrary operator matrix on each grade.
fn graded_f3(alg: usize, g: usize, weight: i64, entries: &[i64]) -> Bundle {
    let f = Field::prime(3).unwrap();
    let a = [corpus::two_dim(), corpus::three_dim()][alg].try_map(|&x| Ok(f.from_int(x))).unwrap();
    let grades = grading(g);
    let n = a.dim;
    let mut d = Draw { pool: entries, at: 0 };
    let ops: Vec<Matrix<FieldElement>> =
        (0..grades.len()).map(|_| Matrix { n, data: (0..n * n).map(|_| f.from_int(d.next())).collect() }).collect();
    group_algebra_bundle(&a, &ops, &f.from_int(weight), &grades).unwrap()
}

proptest! {
    #[test]
    fn bundle_text_round_trips(
        g in 0usize..4,
        dims in prop::collection::vec(0usize..3, 1..4),
        codes in prop::collection::vec(-6i64..6, 1..64),
        unit in any::<bool>(),
    ) {
        let b = param_bundle(g, &dims, &codes, unit);
        let text = format::save(&b);
        prop_assert_eq!(format::load(&text).unwrap(), b);
    }

    #[test]
    fn tilde_is_an_involution_preserving_the_identity(
        alg in 0usize..2,
        g in 0usize..4,
        w in 0i64..3,
        entries in prop::collection::vec(0i64..3, 1..40),
    ) {
        let b = graded_f3(alg, g, w, &entries);
        let t = tilde_bundle(&b, Mode::Fast).unwrap();
        prop_assert_eq!(&tilde_bundle(&t, Mode::Fast).unwrap().operators, &b.operators);
        prop_assert_eq!(check(Law::RotaBaxter, &b).unwrap().passed(), check(Law::RotaBaxter, &t).unwrap().passed());
    }

    #[test]
    fn dual_identity_holds_exactly_when_the_algebra_one_does(
        alg in 0usize..2,
        g in 0usize..4,
        w in 0i64..3,
        entries in prop::collection::vec(0i64..3, 1..40),
    ) {
        let b = graded_f3(alg, g, w, &entries);
        let d = dualize(&b).unwrap();
        prop_assert_eq!(check(Law::RotaBaxter, &b).unwrap().passed(), check(Law::RbTCoalgebra, &d).unwrap().passed());
        prop_assert_eq!(dualize(&d).unwrap(), b);
    }

    #[test]
    fn substitution_agrees_with_evaluation(
        codes in prop::collection::vec(-6i64..6, 1..8),
        lam in -5i64..5,
        t in -5i64..5,
        shift in 1i64..4,
    ) {
        let f = Field::Rational;
        let mut e = ParamExpr::int(1);
        for (i, &c) in codes.iter().enumerate() {
            e = if i % 3 == 2 { e.div(ParamExpr::param("t") + ParamExpr::int(shift)) } else { e * expr(c) + expr(c + 1) };
        }
        let partial = Assignment::from([(WEIGHT.to_string(), f.from_int(lam))]);
        let mut full = partial.clone();
        full.insert("t".into(), f.from_int(t));
        let direct = e.eval(&f, &full);
        prop_assume!(direct.is_ok());
        prop_assert_eq!(e.substitute(&partial).eval(&f, &full).unwrap(), direct.unwrap());
    }

    #[test]
    fn partial_then_full_specialization_matches_direct(
        g in 0usize..4,
        dims in prop::collection::vec(1usize..3, 1..4),
        codes in prop::collection::vec(-6i64..6, 1..64),
        lam in -4i64..4,
        t in -4i64..4,
    ) {
        let b = param_bundle(g, &dims, &codes, false);
        let f = Field::Rational;
        let first = Assignment::from([(WEIGHT.to_string(), f.from_int(lam))]);
        let mut full = first.clone();
        full.insert("t".into(), f.from_int(t));
        let rest = Assignment::from([("t".to_string(), f.from_int(t))]);
        let staged = b.partially_specialize(&first).unwrap().specialize(&rest).unwrap();
        prop_assert_eq!(staged, b.specialize(&full).unwrap());
    }
}
