//! Doubling spectra, reordering isomorphisms and pivot independence over
//! the corpus.

use std::collections::BTreeSet;

use polykit::columns;
use polykit::doubling::{self, Provenance};
use polykit::{catalog, scalar, Int, Polytope};

fn v(x: &[i64]) -> Vec<Int> {
    scalar::vec_from(x)
}

fn vector_set(t: &polykit::ColumnTable) -> BTreeSet<Vec<Int>> {
    t.columns.iter().map(|c| c.v.clone()).collect()
}

#[test]
fn long_spectrum_decomposes_every_seed_column() {
    let s = doubling::spectrum(&catalog::quadrangle_c(), 12).unwrap();
    assert_eq!(s.nodes.len(), 13);
    let last = s.nodes.last().unwrap();
    assert_eq!(last.polytope.dim(), 14);
    // The seed column (0,-1) is doubled along more than once.
    let u = s.nodes[0].columns.index_of(&v(&[0, -1])).unwrap();
    let uid = s.nodes[0].column_ids[u];
    assert!(s.ledger[&uid].len() >= 2, "{:?}", s.ledger[&uid]);
    for id in 0..3 {
        assert!(!s.ledger[&id].is_empty());
    }
    for node in &s.nodes {
        assert!(node.columns.is_balanced(), "node {}", node.index);
    }
}

#[test]
fn spectrum_tables_match_geometry() {
    let s = doubling::spectrum(&catalog::quadrangle_c(), 3).unwrap();
    for node in &s.nodes {
        let direct = columns::column_vectors(&node.polytope);
        assert_eq!(vector_set(&direct), vector_set(&node.columns), "node {}", node.index);
        assert_eq!(direct.products.len(), node.columns.products.len());
        assert!(node.provenance.iter().all(|p| *p != Provenance::Extra) || node.index == 0);
    }
}

#[test]
fn pairings_do_not_depend_on_the_node() {
    let s = doubling::spectrum(&catalog::quadrangle_c(), 6).unwrap();
    for w in s.nodes.windows(3) {
        let ids: BTreeSet<usize> = w[0].column_ids.iter().copied().collect();
        for &a in &ids {
            for &b in &ids {
                let vals: Vec<Int> = w
                    .iter()
                    .map(|n| {
                        let (i, j) = (n.column_by_id(a).unwrap(), n.column_by_id(b).unwrap());
                        n.columns.height(j, n.columns.get(i).base).clone()
                    })
                    .collect();
                assert!(vals.windows(2).all(|x| x[0] == x[1]), "ids {a},{b} at node {}: {vals:?}", w[0].index);
            }
        }
    }
}

#[test]
fn doubled_columns_factor_through_delta_plus() {
    // Along a base facet F, each column v with base F has v^- = delta+ v^|.
    let s = doubling::spectrum(&catalog::quadrangle_c(), 4).unwrap();
    for pair in s.nodes.windows(2) {
        let (prev, next) = (&pair[0], &pair[1]);
        let step = next.step.as_ref().unwrap();
        let d = doubling::double_with_pivot(&prev.polytope, step.facet, step.pivot.clone()).unwrap();
        let lifted = doubling::lift_columns_from(&d, &prev.columns).unwrap();
        let mut seen = 0;
        for k in prev.columns.with_base(step.facet) {
            let (m, b) = (lifted.minus_index[k], lifted.bar_index[k]);
            assert_eq!(lifted.table.product(lifted.delta_plus_index, b), Some(m));
            seen += 1;
        }
        assert!(seen >= 1);
    }
}

#[test]
fn reordering_is_an_isomorphism_on_the_corpus() {
    let mut checked = 0;
    for (name, p) in catalog::corpus() {
        if p.dim() != 2 {
            continue;
        }
        let n = p.facets().len();
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let iso = doubling::reorder_iso(&p, &[a, b], &[1, 0]).unwrap_or_else(|e| panic!("{name} {a},{b}: {e}"));
                assert_eq!(iso.points.len(), iso.target.lattice_points().len());
                checked += 1;
            }
        }
    }
    assert!(checked > 40);
}

#[test]
fn reordering_three_facets_in_every_order() {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for p in [catalog::simplex(2, 2), catalog::quadrangle_c(), catalog::trapezoid_b()] {
        let fs = [0, 1, 2];
        for sigma in perms {
            let iso = doubling::reorder_iso(&p, &fs, &sigma).unwrap();
            for (x, y) in &iso.points {
                assert_eq!(&iso.map.apply(x), y);
            }
        }
    }
    assert!(doubling::reorder_iso(&catalog::quadrangle_c(), &[0, 1], &[0, 0]).is_err());
}

/// A nonzero vector on which `a` vanishes: `a_1 e_0 - a_0 e_1`, or `e_0`
/// when that is zero.
fn kernel_vector(a: &[Int]) -> Vec<Int> {
    let mut w = vec![Int::from(0); a.len()];
    w[0] = a[1].clone();
    w[1] = -a[0].clone();
    if scalar::is_zero_vec(&w) {
        w[0] = Int::from(1);
    }
    assert_eq!(scalar::dot(a, &w), Int::from(0));
    w
}

#[test]
fn pivot_choice_does_not_matter() {
    let mut checked = 0;
    for (name, p) in catalog::corpus() {
        if p.dim() < 2 {
            continue;
        }
        for f in 0..p.facets().len() {
            let a = doubling::double(&p, f).unwrap();
            let other = scalar::add(&a.pivot, &kernel_vector(&p.facets()[f].normal));
            let b = doubling::double_with_pivot(&p, f, other).unwrap();
            let map = doubling::pivot_change_map(&a, &b).unwrap_or_else(|e| panic!("{name} facet {f}: {e}"));
            // The parent copy is fixed pointwise.
            for x in p.lattice_points() {
                assert_eq!(map.apply(&a.embed_minus(x)), b.embed_minus(x));
            }
            assert_eq!(
                columns::column_vectors(&a.result).len(),
                columns::column_vectors(&b.result).len()
            );
            checked += 1;
        }
    }
    assert!(checked > 50);
}

#[test]
fn doubling_a_point_is_rejected() {
    let p = Polytope::from_vertices(&[v(&[0, 0]), v(&[2, 0]), v(&[0, 2])]).unwrap();
    assert!(doubling::double_with_pivot(&p, 0, v(&[0, 0])).is_err());
    assert!(doubling::double(&p, 7).is_err());
}
