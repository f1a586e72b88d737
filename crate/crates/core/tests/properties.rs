//! Property tests over random lattice polygons and integer matrices.

use std::collections::BTreeSet;

use num_traits::Zero;
use polykit::algebra::{self, Element, Letter, Word};
use polykit::classify::{self, ClassTag};
use polykit::columns;
use polykit::doubling;
use polykit::intlin::{self, IntMatrix};
use polykit::ring::{IntegerRing, ModRing, PolyRing, Ring};
use polykit::scalar;
use polykit::{Int, Polytope};
use proptest::prelude::*;

fn polygon_points() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0i64..=4, 0i64..=3), 3..7).prop_map(|v| v.into_iter().map(|(a, b)| vec![a, b]).collect())
}

/// A polygon from random points, or `None` when they are collinear.
fn polygon(pts: &[Vec<i64>]) -> Option<Polytope> {
    let pts: Vec<Vec<Int>> = pts.iter().map(|p| scalar::vec_from(p)).collect();
    let p = Polytope::from_vertices(&pts).ok()?;
    (p.dim() == 2).then_some(p)
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..4, 1usize..4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

fn to_matrix(rows: &[Vec<i64>]) -> IntMatrix<Int> {
    let cols = rows[0].len();
    IntMatrix::from_rows(rows.iter().map(|r| scalar::vec_from(r)).collect(), cols).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_is_idempotent(rows in small_matrix()) {
        let m = to_matrix(&rows);
        let h = intlin::hermite_normal_form(&m);
        prop_assert_eq!(&intlin::hermite_normal_form(&h.h).h, &h.h);
        prop_assert_eq!(h.transform.forward.mul(&m).unwrap(), h.h.clone());
    }

    #[test]
    fn normalization_is_idempotent(rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 1..6)) {
        let pts: Vec<Vec<Int>> = rows.iter().map(|r| scalar::vec_from(r)).collect();
        let (change, d) = intlin::normalize_affine_lattice(&pts).unwrap();
        let local: Vec<Vec<Int>> = pts.iter().map(|x| change.forward(x).unwrap()).collect();
        let (again, d2) = intlin::normalize_affine_lattice(&local).unwrap();
        prop_assert_eq!(d, d2);
        prop_assert!(again.is_identity());
    }

    #[test]
    fn facet_forms_are_sharp(pts in polygon_points()) {
        let Some(p) = polygon(&pts) else { return Ok(()); };
        for f in p.facets() {
            prop_assert!(scalar::content(&f.normal) == Int::from(1));
            let on: Vec<Vec<Int>> = p.lattice_points().iter().filter(|x| f.height(x).is_zero()).cloned().collect();
            prop_assert!(p.lattice_points().iter().all(|x| f.height(x) >= Int::zero()));
            prop_assert_eq!(on.iter().collect::<Vec<_>>(), p.facet_points(f.id).unwrap());
            // Any interior witness gives the same form.
            for inside in p.lattice_points().iter().filter(|x| !f.height(x).is_zero()) {
                let (a, b) = intlin::primitive_form(&on, inside).unwrap();
                prop_assert_eq!(&a, &f.normal);
                prop_assert_eq!(&b, &f.offset);
            }
        }
        let again = Polytope::from_inequalities(2, &p.forms()).unwrap();
        prop_assert_eq!(again.vertices(), p.vertices());
    }

    #[test]
    fn column_oracle_and_criteria(pts in polygon_points()) {
        let Some(p) = polygon(&pts) else { return Ok(()); };
        let lp = p.lattice_points();
        let diffs: BTreeSet<Vec<Int>> = lp.iter().flat_map(|a| lp.iter().map(move |b| scalar::sub(a, b))).filter(|d| !scalar::is_zero_vec(d)).collect();
        for d in &diffs {
            prop_assert_eq!(columns::base_facet(&p, d), columns::is_column_geometric(&p, d).unwrap());
        }
        let t = columns::column_vectors(&p);
        prop_assert!(columns::check_product_criteria(&p, &t).is_empty());
        // Products exist in exactly one order when the sum is a column.
        for i in 0..t.len() {
            for j in 0..t.len() {
                let s = scalar::add(&t.get(i).v, &t.get(j).v);
                if i == j || scalar::is_zero_vec(&s) {
                    continue;
                }
                let both = [t.product(i, j), t.product(j, i)].iter().filter(|x| x.is_some()).count();
                prop_assert_eq!(both == 1, t.index_of(&s).is_some());
            }
        }
    }

    #[test]
    fn doubling_equations_and_lifting(pts in polygon_points()) {
        let Some(p) = polygon(&pts) else { return Ok(()); };
        let t = columns::column_vectors(&p);
        for f in 0..p.facets().len() {
            let d = doubling::double(&p, f).unwrap();
            prop_assert!(d.check_equations().is_empty());
            let lifted = doubling::lift_columns(&d).unwrap();
            let actual = columns::column_vectors(&d.result);
            let l: BTreeSet<_> = lifted.table.columns.iter().map(|c| c.v.clone()).collect();
            let a: BTreeSet<_> = actual.columns.iter().map(|c| c.v.clone()).collect();
            if doubling::lifting_is_complete(&t, f) {
                prop_assert_eq!(&l, &a);
                prop_assert!(actual.is_balanced());
                prop_assert_eq!(lifted.rule_products.clone(), lifted.table_products());
            } else {
                prop_assert!(l.is_subset(&a));
            }
        }
    }

    #[test]
    fn letters_preserve_grading_and_invert(pts in polygon_points(), lam in -3i64..=3) {
        let Some(p) = polygon(&pts) else { return Ok(()); };
        let t = columns::column_vectors(&p);
        let r = IntegerRing;
        let lp = p.lattice_points();
        for c in &t.columns {
            let l = Letter::elementary(c.v.clone(), Int::from(lam));
            let w = Word { letters: vec![l.inverse(&r), l.clone()] };
            prop_assert!(algebra::words_equal(&p, &r, &w, &Word::identity()).unwrap());
            // A degree-two monomial stays in degree two.
            let m = scalar::extend(&scalar::add(&lp[0], &lp[lp.len() - 1]), Int::from(2));
            let img = algebra::apply_letter(&p, &r, &l, &Element::monomial(&r, m)).unwrap();
            prop_assert!(img.terms().all(|(e, _)| e[2] == Int::from(2)));
        }
    }

    #[test]
    fn classifier_is_total(pts in polygon_points()) {
        let Some(p) = polygon(&pts) else { return Ok(()); };
        let c = classify::classify_polygon(&p).unwrap();
        let balanced = classify::is_balanced(&p);
        let (b1, b2) = classify::balance_both_ways(&p);
        prop_assert_eq!(b1, b2);
        if !matches!(c.tag, ClassTag::NoColumns | ClassTag::NotBalanced) {
            prop_assert!(balanced);
        }
        prop_assert!(classify::e_equivalent(&p, &p).is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn commutator_formula_on_random_polygons(pts in polygon_points()) {
        let Some(p) = polygon(&pts) else { return Ok(()); };
        let t = columns::column_vectors(&p);
        if t.len() > 6 {
            return Ok(());
        }
        for rep in algebra::verify_comrel_all(&p, &t).unwrap() {
            prop_assert!(rep.pass, "{:?}", rep);
        }
    }

    #[test]
    fn commutator_formula_over_finite_rings(pts in polygon_points(), m in 2u32..6, a in 0u32..6, b in 0u32..6) {
        let Some(p) = polygon(&pts) else { return Ok(()); };
        let t = columns::column_vectors(&p);
        let r = ModRing::new(Int::from(m)).unwrap();
        let (l, mu) = (r.from_i64(a as i64), r.from_i64(b as i64));
        for u in 0..t.len() {
            for v in 0..t.len() {
                if u == v || scalar::is_zero_vec(&scalar::add(&t.get(u).v, &t.get(v).v)) {
                    continue;
                }
                prop_assert!(algebra::verify_comrel(&p, &t, u, v, &r, &l, &mu).unwrap().pass);
            }
        }
    }
}

#[test]
fn laurent_units_invert() {
    let r = PolyRing::new(&["a", "b"]).unwrap();
    let x = r.parse("a^2*b^-1").unwrap();
    let y = r.unit_inverse(&x).unwrap();
    assert_eq!(r.mul(&x, &y), r.one());
}
