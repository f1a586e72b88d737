//! Steinberg presentations of column tables, their evaluation in
//! elementary automorphisms, and finite block-matrix models of the stable
//! groups of the balanced polygons.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{self, CommutatorCase, Convention, Letter, Word};
use crate::columns::ColumnTable;
use crate::error::{Error, Result};
use crate::intlin::{self, IntMatrix};
use crate::polytope::Polytope;
use crate::ring::{binomial, ModRing, PolyRing, Ring};
use crate::scalar::{self, Scalar};

/// A term `x_w^{c lambda^a mu^b}` on the right of a commutator relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationTerm {
    pub column: usize,
    pub coefficient: BigInt,
    pub lambda_power: u64,
    pub mu_power: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `x_v^lambda x_v^mu = x_v^{lambda + mu}`
    Additive { column: usize },
    /// `[x_u^lambda, x_v^mu] = prod terms`
    Commutator {
        u: usize,
        v: usize,
        case: CommutatorCase,
        terms: Vec<RelationTerm>,
    },
}

/// Generators are the columns of a table; relations are listed in column
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinbergPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<Relation>,
}

impl SteinbergPresentation {
    pub fn commutators(&self) -> impl Iterator<Item = &Relation> {
        self.relations
            .iter()
            .filter(|r| matches!(r, Relation::Commutator { .. }))
    }

    pub fn render(&self, r: &Relation) -> String {
        let g = |i: usize| format!("x{}", self.generators[i]);
        match r {
            Relation::Additive { column } => {
                format!("{0}^lambda {0}^mu = {0}^(lambda+mu)", g(*column))
            }
            Relation::Commutator { u, v, terms, .. } => {
                let rhs = if terms.is_empty() {
                    "1".to_string()
                } else {
                    terms
                        .iter()
                        .map(|t| {
                            format!(
                                "{}^({}*lambda^{}*mu^{})",
                                g(t.column),
                                t.coefficient,
                                t.lambda_power,
                                t.mu_power
                            )
                        })
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                format!("[{}^lambda, {}^mu] = {}", g(*u), g(*v), rhs)
            }
        }
    }
}

/// The presentation of a column table: one additivity relation per column
/// and one commutator relation per ordered pair with `u + v != 0`.
///
/// When `vu` exists the exponent is `<base(u), v>`, as in the commutator
/// theorem.
pub fn presentation<T: Scalar>(t: &ColumnTable<T>) -> Result<SteinbergPresentation> {
    let mut relations: Vec<Relation> = (0..t.len()).map(|c| Relation::Additive { column: c }).collect();
    for u in 0..t.len() {
        for v in 0..t.len() {
            if u == v || scalar::is_zero_vec(&scalar::add(&t.get(u).v, &t.get(v).v)) {
                continue;
            }
            let case = algebra::commutator_case(t, u, v)?;
            let mut terms = Vec::new();
            let (a, b, n, sign, swap) = match case {
                CommutatorCase::Trivial => (u, v, 0, 1, false),
                CommutatorCase::Product { n } => (u, v, n, -1, false),
                CommutatorCase::ReverseProduct { n } => (v, u, n, 1, true),
            };
            for i in 1..=n {
                let w = scalar::add_scaled(&t.get(a).v, &T::from_u64(i).expect("small"), &t.get(b).v);
                let column = t
                    .index_of(&w)
                    .ok_or_else(|| Error::Internal(format!("{} is not a column", scalar::fmt_vec(&w))))?;
                let (lambda_power, mu_power) = if swap { (i, 1) } else { (1, i) };
                terms.push(RelationTerm {
                    column,
                    coefficient: binomial(n, i) * BigInt::from(sign),
                    lambda_power,
                    mu_power,
                });
            }
            relations.push(Relation::Commutator { u, v, case, terms });
        }
    }
    Ok(SteinbergPresentation {
        generators: t.columns.iter().map(|c| scalar::fmt_vec(&c.v)).collect(),
        relations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relation: String,
    pub pass: bool,
    /// Images of the two sides on the first point where they differ.
    pub detail: Option<String>,
}

/// Replace each generator by the elementary automorphism of its column and
/// check every relation in `R[P]`.
pub fn pi_check<T: Scalar, R: Ring>(
    p: &Polytope<T>,
    t: &ColumnTable<T>,
    pres: &SteinbergPresentation,
    ring: &R,
    lambda: &R::Elem,
    mu: &R::Elem,
) -> Result<Vec<RelationCheck>> {
    let conv = algebra::convention()?;
    let e = |c: usize, x: &R::Elem| Word::elementary(t.get(c).v.clone(), x.clone());
    let mut out = Vec::new();
    for rel in &pres.relations {
        let (lhs, rhs) = match rel {
            Relation::Additive { column } => (
                conv.product(&[&e(*column, lambda), &e(*column, mu)]),
                e(*column, &ring.add(lambda, mu)),
            ),
            Relation::Commutator { u, v, terms, .. } => {
                let lhs = conv.commutator(ring, &e(*u, lambda), &e(*v, mu));
                let letters = terms
                    .iter()
                    .map(|term| {
                        let c = ring.mul(
                            &ring.from_int(&term.coefficient),
                            &ring.mul(&ring.pow(lambda, term.lambda_power), &ring.pow(mu, term.mu_power)),
                        );
                        Letter::elementary(t.get(term.column).v.clone(), c)
                    })
                    .collect();
                (lhs, Word { letters })
            }
        };
        let mut detail = None;
        for x in p.lattice_points() {
            let m = algebra::Element::point(ring, x);
            let a = algebra::apply_word(p, ring, &lhs, &m)?;
            let b = algebra::apply_word(p, ring, &rhs, &m)?;
            if a != b {
                detail = Some(format!(
                    "at {}: {} vs {}",
                    scalar::fmt_vec(x),
                    a.render(ring),
                    b.render(ring)
                ));
                break;
            }
        }
        out.push(RelationCheck {
            relation: pres.render(rel),
            pass: detail.is_none(),
            detail,
        });
    }
    Ok(out)
}

/// [`pi_check`] over `Z[lambda, mu]`.
pub fn pi_check_symbolic<T: Scalar>(
    p: &Polytope<T>,
    t: &ColumnTable<T>,
) -> Result<Vec<RelationCheck>> {
    let r = PolyRing::new(&["lambda", "mu"])?;
    let (l, m) = (r.var("lambda")?, r.var("mu")?);
    pi_check(p, t, &presentation(t)?, &r, &l, &m)
}

/// Square matrix over a ring, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<E> {
    n: usize,
    entries: Vec<E>,
}

impl<E: Clone + PartialEq + Eq + fmt::Debug> Mat<E> {
    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        let mut entries = vec![ring.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = ring.one();
        }
        Mat { n, entries }
    }

    /// `I + lambda E_{row, col}`
    pub fn elementary<R: Ring<Elem = E>>(ring: &R, n: usize, row: usize, col: usize, lambda: &E) -> Self {
        let mut m = Self::identity(ring, n);
        m.entries[row * n + col] = ring.add(&m.entries[row * n + col], lambda);
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.n + j]
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let n = self.n;
        let mut entries = vec![ring.zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !ring.is_zero(b) {
                        entries[i * n + j] = ring.add(&entries[i * n + j], &ring.mul(a, b));
                    }
                }
            }
        }
        Mat { n, entries }
    }
}

/// Class of a balanced polygon with a block-matrix stable group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelClass {
    B,
    C,
    D { t: usize },
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelClass::B => write!(f, "b"),
            ModelClass::C => write!(f, "c"),
            ModelClass::D { t } => write!(f, "d(t={t})"),
        }
    }
}

/// Basis label: the copies `A` and `B` of `{1..j}` and the extra indices
/// (the origin for class c, `{0..t-1}` for class d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    A(usize),
    B(usize),
    Extra(usize),
}

impl Label {
    fn block(&self) -> usize {
        match self {
            Label::A(_) => 0,
            Label::B(_) => 1,
            Label::Extra(_) => 2,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::A(i) => write!(f, "{i}'"),
            Label::B(i) => write!(f, "{i}''"),
            Label::Extra(i) => write!(f, "{i}"),
        }
    }
}

/// Where the generator `x_{ik}` puts its entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Placement {
    /// Entry at row `i`, column `k`.
    Direct,
    /// Entry at row `k`, column `i`.
    Transposed,
}

/// How a formal product of generators maps to a matrix product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixOrder {
    /// `x y -> X Y`
    Standard,
    /// `x y -> Y X`
    Reversed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Realization {
    pub placement: Placement,
    pub order: MatrixOrder,
}

/// The finite index model of class `b`, `c` or `d` at truncation `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexModel {
    pub class: ModelClass,
    pub j: usize,
    /// Basis in matrix order: `A`, then `B`, then the extra indices.
    pub basis: Vec<Label>,
    /// The index set, without diagonal pairs.
    pub generators: Vec<(Label, Label)>,
    position: BTreeMap<Label, usize>,
}

impl IndexModel {
    pub fn new(class: ModelClass, j: usize) -> Result<Self> {
        if j == 0 {
            return Err(Error::Precondition("truncation j must be at least 1".into()));
        }
        let a: Vec<Label> = (1..=j).map(Label::A).collect();
        let b: Vec<Label> = (1..=j).map(Label::B).collect();
        let mut basis = a.clone();
        let mut blocks: Vec<(Vec<Label>, Vec<Label>)> = vec![(a.clone(), a.clone())];
        match class {
            ModelClass::B => {
                basis.extend(&b);
                blocks.push((b.clone(), a.clone()));
                blocks.push((b.clone(), b.clone()));
            }
            ModelClass::C => {
                basis.extend(&b);
                basis.push(Label::Extra(0));
                blocks.push((b.clone(), a.clone()));
                blocks.push((b.clone(), b.clone()));
                blocks.push((vec![Label::Extra(0)], a.clone()));
                blocks.push((vec![Label::Extra(0)], b.clone()));
            }
            ModelClass::D { t } => {
                if t == 0 {
                    return Err(Error::Precondition("class d needs t >= 1".into()));
                }
                let extra: Vec<Label> = (0..t).map(Label::Extra).collect();
                basis.extend(&extra);
                blocks.push((extra, a.clone()));
            }
        }
        let mut generators = Vec::new();
        for (rows, cols) in blocks {
            for &r in &rows {
                for &c in &cols {
                    if r != c {
                        generators.push((r, c));
                    }
                }
            }
        }
        let position = basis.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        Ok(IndexModel {
            class,
            j,
            basis,
            generators,
            position,
        })
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, g: (Label, Label)) -> bool {
        self.generators.contains(&g)
    }

    /// Matrix position of generator `g` under a placement.
    pub fn entry(&self, g: (Label, Label), placement: Placement) -> (usize, usize) {
        let (i, k) = (self.position[&g.0], self.position[&g.1]);
        match placement {
            Placement::Direct => (i, k),
            Placement::Transposed => (k, i),
        }
    }

    pub fn matrix<R: Ring>(&self, ring: &R, g: (Label, Label), lambda: &R::Elem, placement: Placement) -> Mat<R::Elem> {
        let (r, c) = self.entry(g, placement);
        Mat::elementary(ring, self.size(), r, c, lambda)
    }

    /// Whether a position lies in the displayed block shape: diagonal
    /// blocks (the extra block only on its diagonal) and blocks above them.
    pub fn in_block_shape(&self, row: usize, col: usize) -> bool {
        if row == col {
            return true;
        }
        let (br, bc) = (self.basis[row].block(), self.basis[col].block());
        match br.cmp(&bc) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => br != 2,
        }
    }
}

fn mat_product<R: Ring>(ring: &R, order: MatrixOrder, ms: &[&Mat<R::Elem>]) -> Mat<R::Elem> {
    let n = ms[0].size();
    let mut out = Mat::identity(ring, n);
    for m in ms {
        out = match order {
            MatrixOrder::Standard => out.mul(ring, m),
            MatrixOrder::Reversed => m.mul(ring, &out),
        };
    }
    out
}

fn mat_commutator<R: Ring>(
    ring: &R,
    conv: Convention,
    order: MatrixOrder,
    a: &Mat<R::Elem>,
    ai: &Mat<R::Elem>,
    b: &Mat<R::Elem>,
    bi: &Mat<R::Elem>,
) -> Mat<R::Elem> {
    match conv.bracket {
        algebra::Bracket::Leading => mat_product(ring, order, &[a, b, ai, bi]),
        algebra::Bracket::Trailing => mat_product(ring, order, &[ai, bi, a, b]),
    }
}

/// Check every Steinberg relation of the model for the given values.
///
/// Relations: `x_{ik}^l x_{ik}^m = x_{ik}^{l+m}`, and for `(i,j), (k,l)` in
/// the index set, `[x_ij^l, x_kl^m] = x_il^{lm}` if `j = k`, `i != l`, and
/// `= 1` if `j != k`, `i != l`.
pub fn model_relation_failures<R: Ring>(
    model: &IndexModel,
    real: Realization,
    ring: &R,
    values: &[(R::Elem, R::Elem)],
) -> Result<Vec<String>> {
    let conv = algebra::convention()?;
    let n = model.size();
    let mut bad = Vec::new();
    for (lam, mu) in values {
        let nl = ring.neg(lam);
        let nm = ring.neg(mu);
        for &g in &model.generators {
            let a = model.matrix(ring, g, lam, real.placement);
            let b = model.matrix(ring, g, mu, real.placement);
            let s = model.matrix(ring, g, &ring.add(lam, mu), real.placement);
            if mat_product(ring, real.order, &[&a, &b]) != s {
                bad.push(format!("additivity of x_({},{})", g.0, g.1));
            }
        }
        for &g in &model.generators {
            let a = model.matrix(ring, g, lam, real.placement);
            let ai = model.matrix(ring, g, &nl, real.placement);
            for &h in &model.generators {
                if g.0 == h.1 {
                    continue;
                }
                let b = model.matrix(ring, h, mu, real.placement);
                let bi = model.matrix(ring, h, &nm, real.placement);
                let c = mat_commutator(ring, conv, real.order, &a, &ai, &b, &bi);
                let expect = if g.1 == h.0 {
                    let target = (g.0, h.1);
                    if !model.contains(target) {
                        return Err(Error::Internal(format!(
                            "index set not closed: ({},{})",
                            target.0, target.1
                        )));
                    }
                    model.matrix(ring, target, &ring.mul(lam, mu), real.placement)
                } else {
                    Mat::identity(ring, n)
                };
                if c != expect {
                    bad.push(format!(
                        "[x_({},{}), x_({},{})] with ({}, {})",
                        g.0,
                        g.1,
                        h.0,
                        h.1,
                        ring.render(lam),
                        ring.render(mu)
                    ));
                }
            }
        }
    }
    Ok(bad)
}

fn symbolic_values() -> (PolyRing, Vec<(crate::ring::Poly, crate::ring::Poly)>) {
    let r = PolyRing::new(&["lambda", "mu"]).expect("valid names");
    let v = vec![(r.var("lambda").expect("var"), r.var("mu").expect("var"))];
    (r, v)
}

fn realization_fits(model: &IndexModel, real: Realization) -> Result<bool> {
    let shape = model.generators.iter().all(|&g| {
        let (r, c) = model.entry(g, real.placement);
        model.in_block_shape(r, c)
    });
    if !shape {
        return Ok(false);
    }
    let (r, vals) = symbolic_values();
    Ok(model_relation_failures(model, real, &r, &vals)?.is_empty())
}

/// All realizations under which the calibration models of classes b, c
/// and d satisfy the relations and land in the displayed block shape.
pub fn calibrate_realizations() -> Result<Vec<Realization>> {
    let models = [
        IndexModel::new(ModelClass::B, 2)?,
        IndexModel::new(ModelClass::C, 2)?,
        IndexModel::new(ModelClass::D { t: 2 }, 2)?,
    ];
    let mut out = Vec::new();
    for placement in [Placement::Direct, Placement::Transposed] {
        for order in [MatrixOrder::Standard, MatrixOrder::Reversed] {
            let real = Realization { placement, order };
            let mut ok = true;
            for m in &models {
                ok &= realization_fits(m, real)?;
            }
            if ok {
                out.push(real);
            }
        }
    }
    Ok(out)
}

/// The calibrated realization, computed once and asserted unique.
pub fn realization() -> Result<Realization> {
    static REAL: OnceLock<std::result::Result<Realization, String>> = OnceLock::new();
    REAL.get_or_init(|| match calibrate_realizations() {
        Ok(v) if v.len() == 1 => Ok(v[0]),
        Ok(v) => Err(format!("{} realizations fit the calibration models", v.len())),
        Err(e) => Err(e.to_string()),
    })
    .clone()
    .map_err(Error::Internal)
}

/// Relation check of a model over `Z[lambda, mu]` and exhaustively over
/// `Z/m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelReport {
    pub class: ModelClass,
    pub j: usize,
    pub size: usize,
    pub generators: usize,
    pub block_shape: bool,
    pub symbolic_failures: Vec<String>,
    pub modular: BTreeMap<String, usize>,
}

impl ModelReport {
    pub fn pass(&self) -> bool {
        self.block_shape && self.symbolic_failures.is_empty() && self.modular.values().all(|&k| k == 0)
    }
}

pub fn check_model(model: &IndexModel, moduli: &[u32]) -> Result<ModelReport> {
    let real = realization()?;
    let block_shape = model.generators.iter().all(|&g| {
        let (r, c) = model.entry(g, real.placement);
        model.in_block_shape(r, c)
    });
    let (r, vals) = symbolic_values();
    let symbolic_failures = model_relation_failures(model, real, &r, &vals)?;
    let mut modular = BTreeMap::new();
    for &m in moduli {
        let zm = ModRing::new(BigInt::from(m))?;
        let els = zm.elements();
        let vals: Vec<_> = els
            .iter()
            .flat_map(|a| els.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        let bad = model_relation_failures(model, real, &zm, &vals)?;
        modular.insert(zm.describe(), bad.len());
    }
    Ok(ModelReport {
        class: model.class,
        j: model.j,
        size: model.size(),
        generators: model.generators.len(),
        block_shape,
        symbolic_failures,
        modular,
    })
}

/// Outcome of the centrality check: a unipotent element supported on the
/// off-diagonal blocks that commutes with all block-diagonal generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Centrality {
    /// The commutation constraints force every off-diagonal entry to zero
    /// over every ring.
    Trivial,
    /// Some nonzero choice commutes.
    Nontrivial,
    /// There are no block-diagonal generators to commute with.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupReport {
    pub class: ModelClass,
    pub j: usize,
    /// Groups of generators sharing a matrix column (resp. row), with
    /// their sizes.
    pub column_groups: Vec<usize>,
    pub row_groups: Vec<usize>,
    pub commute: bool,
    pub homomorphism: bool,
    pub injective: bool,
    pub tuples_checked: usize,
    pub centrality: Centrality,
}

impl SubgroupReport {
    pub fn pass(&self) -> bool {
        self.commute && self.homomorphism && self.injective && self.centrality == Centrality::Trivial
    }
}

/// Checks on the subgroups generated by the elementary matrices that share
/// a column (the `U` groups) or a row (the `V` groups): pairwise
/// commutation, the additive homomorphism, injectivity of the tuple map
/// over `Z/m`, and centrality of the block-diagonal part.
pub fn uv_subgroup_checks(model: &IndexModel, modulus: u32, seed: u64) -> Result<SubgroupReport> {
    let real = realization()?;
    let mut by_col: BTreeMap<usize, Vec<(Label, Label)>> = BTreeMap::new();
    let mut by_row: BTreeMap<usize, Vec<(Label, Label)>> = BTreeMap::new();
    for &g in &model.generators {
        let (r, c) = model.entry(g, real.placement);
        by_col.entry(c).or_default().push(g);
        by_row.entry(r).or_default().push(g);
    }
    let groups: Vec<&Vec<(Label, Label)>> = by_col.values().chain(by_row.values()).collect();

    let names: Vec<String> = (0..2 * model.generators.len()).map(|i| format!("t{i}")).collect();
    let pr = PolyRing::new(&names)?;
    let zm = ModRing::new(BigInt::from(modulus))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut commute = true;
    let mut homomorphism = true;
    let mut injective = true;
    let mut tuples_checked = 0;
    for group in &groups {
        let s = group.len();
        let xs: Vec<_> = (0..2 * s).map(|i| pr.var(&names[i])).collect::<Result<_>>()?;
        for a in 0..s {
            for b in (a + 1)..s {
                let ma = model.matrix(&pr, group[a], &xs[a], real.placement);
                let mb = model.matrix(&pr, group[b], &xs[b], real.placement);
                commute &= mat_product(&pr, real.order, &[&ma, &mb]) == mat_product(&pr, real.order, &[&mb, &ma]);
            }
        }
        let phi = |ring: &PolyRing, vals: &[crate::ring::Poly]| {
            let ms: Vec<_> = group
                .iter()
                .zip(vals)
                .map(|(g, v)| model.matrix(ring, *g, v, real.placement))
                .collect();
            mat_product(ring, real.order, &ms.iter().collect::<Vec<_>>())
        };
        let sums: Vec<_> = (0..s).map(|i| pr.add(&xs[i], &xs[s + i])).collect();
        homomorphism &= mat_product(&pr, real.order, &[&phi(&pr, &xs[..s]), &phi(&pr, &xs[s..])]) == phi(&pr, &sums);

        let total = (modulus as u64).checked_pow(s as u32).unwrap_or(u64::MAX);
        let tuples: Vec<Vec<u32>> = if total <= 4096 {
            (0..total)
                .map(|mut k| {
                    (0..s)
                        .map(|_| {
                            let d = (k % modulus as u64) as u32;
                            k /= modulus as u64;
                            d
                        })
                        .collect()
                })
                .collect()
        } else {
            let mut set = BTreeSet::new();
            while set.len() < 4096 {
                set.insert((0..s).map(|_| rng.gen_range(0..modulus)).collect::<Vec<u32>>());
            }
            set.into_iter().collect()
        };
        let mut images = BTreeSet::new();
        for tup in &tuples {
            let ms: Vec<_> = group
                .iter()
                .zip(tup)
                .map(|(g, v)| model.matrix(&zm, *g, &BigInt::from(*v), real.placement))
                .collect();
            let m = mat_product(&zm, real.order, &ms.iter().collect::<Vec<_>>());
            images.insert(m.entries);
        }
        injective &= images.len() == tuples.len();
        tuples_checked += tuples.len();
    }
    Ok(SubgroupReport {
        class: model.class,
        j: model.j,
        column_groups: by_col.values().map(|g| g.len()).collect(),
        row_groups: by_row.values().map(|g| g.len()).collect(),
        commute,
        homomorphism,
        injective,
        tuples_checked,
        centrality: centrality(model, real.placement)?,
    })
}

/// Solve `E N = N E` for every block-diagonal generator position `E`, with
/// `N` supported on the off-diagonal upper blocks.
pub fn centrality(model: &IndexModel, placement: Placement) -> Result<Centrality> {
    let n = model.size();
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| model.basis[r].block() < model.basis[c].block())
        .collect();
    if unknowns.is_empty() {
        return Ok(Centrality::Trivial);
    }
    let var: BTreeMap<(usize, usize), usize> = unknowns.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let diagonal: Vec<(usize, usize)> = model
        .generators
        .iter()
        .filter(|g| g.0.block() == g.1.block())
        .map(|&g| model.entry(g, placement))
        .collect();
    if diagonal.is_empty() {
        return Ok(Centrality::NotApplicable);
    }
    // (E_{ab} N)_{rc} = [r == a] N_{bc};  (N E_{ab})_{rc} = N_{ra} [c == b].
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for &(a, b) in &diagonal {
        for r in 0..n {
            for c in 0..n {
                let mut eq = vec![BigInt::zero(); unknowns.len()];
                if r == a {
                    if let Some(&k) = var.get(&(b, c)) {
                        eq[k] += BigInt::one();
                    }
                }
                if c == b {
                    if let Some(&k) = var.get(&(r, a)) {
                        eq[k] -= BigInt::one();
                    }
                }
                if eq.iter().any(|x| !x.is_zero()) {
                    rows.push(eq);
                }
            }
        }
    }
    if rows.is_empty() {
        return Ok(Centrality::Nontrivial);
    }
    let m = IntMatrix::from_rows(rows, unknowns.len())?;
    let h = intlin::hermite_normal_form(&m);
    // Unit pivots in every column force N = 0 over any ring.
    let unit = h.rank == unknowns.len()
        && (0..h.rank).all(|i| h.h.get(i, h.pivots[i]).is_one());
    Ok(if unit { Centrality::Trivial } else { Centrality::Nontrivial })
}

/// The combinatorial column model of the quadrangle with one product:
/// points `x_1, ..., x_m` with `x_{j0}` marked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecquadModel {
    pub m: usize,
    pub j0: usize,
}

impl SpecquadModel {
    pub fn new(m: usize, j0: usize) -> Result<Self> {
        if !(1 < j0 && j0 < m) {
            return Err(Error::Precondition(format!("need 1 < j0 < m, got j0={j0}, m={m}")));
        }
        Ok(SpecquadModel { m, j0 })
    }

    /// The zone `1..=4` containing `(a, b)`, first match.
    pub fn zone(&self, a: usize, b: usize) -> Option<u8> {
        let (m, j0) = (self.m, self.j0);
        let within = |x: usize, lo: usize, hi: usize| lo <= x && x <= hi;
        if within(a, 1, j0 - 1) && within(b, 1, j0 - 1) {
            Some(1)
        } else if within(a, j0, m) && within(b, 1, j0 - 1) {
            Some(2)
        } else if within(a, j0, m - 1) && within(b, j0, m - 1) {
            Some(3)
        } else if a == m && within(b, 1, m - 1) {
            Some(4)
        } else {
            None
        }
    }

    /// `x_a - x_b` is a column vector.
    pub fn admissible(&self, a: usize, b: usize) -> bool {
        a != b && self.zone(a, b).is_some()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (1..=self.m)
            .flat_map(|a| (1..=self.m).map(move |b| (a, b)))
            .filter(|&(a, b)| self.admissible(a, b))
            .collect()
    }

    /// Admissible pairs `(i, k)` with no `j` such that `(i, j)` and
    /// `(j, k)` are admissible.
    pub fn composability_failures(&self) -> Vec<(usize, usize)> {
        self.pairs()
            .into_iter()
            .filter(|&(i, k)| !(1..=self.m).any(|j| self.admissible(i, j) && self.admissible(j, k)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::columns;
    use crate::ring::IntegerRing;

    fn poly(vs: &[&[i64]]) -> Polytope<BigInt> {
        Polytope::from_vertices(&vs.iter().map(|v| scalar::vec_from(v)).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn quadrangle_presentation() {
        let p = poly(&[&[0, 0], &[3, 0], &[1, 2], &[0, 1]]);
        let t = columns::column_vectors(&p);
        let pres = presentation(&t).unwrap();
        let comms: Vec<_> = pres.commutators().collect();
        assert_eq!(pres.relations.len() - comms.len(), 3);
        assert_eq!(comms.len(), 6);
        let u = t.index_of(&scalar::vec_from(&[0, -1])).unwrap();
        let v = t.index_of(&scalar::vec_from(&[1, 0])).unwrap();
        let w = t.index_of(&scalar::vec_from(&[1, -1])).unwrap();
        let nontrivial: Vec<_> = comms
            .iter()
            .filter_map(|r| match r {
                Relation::Commutator { u, v, terms, .. } if !terms.is_empty() => Some((*u, *v, terms.clone())),
                _ => None,
            })
            .collect();
        assert_eq!(nontrivial.len(), 2);
        assert!(nontrivial.contains(&(
            u,
            v,
            vec![RelationTerm {
                column: w,
                coefficient: BigInt::from(-1),
                lambda_power: 1,
                mu_power: 1
            }]
        )));
        assert!(pi_check_symbolic(&p, &t).unwrap().iter().all(|c| c.pass));
    }

    #[test]
    fn square_and_triangle_presentations() {
        let sq = poly(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]);
        let t = columns::column_vectors(&sq);
        let pres = presentation(&t).unwrap();
        assert!(pres.commutators().all(|r| matches!(r, Relation::Commutator { terms, .. } if terms.is_empty())));
        let tri = poly(&[&[0, 0], &[2, 0], &[0, 1]]);
        let t = columns::column_vectors(&tri);
        let pres = presentation(&t).unwrap();
        let u0 = t.index_of(&scalar::vec_from(&[0, -1])).unwrap();
        let v0 = t.index_of(&scalar::vec_from(&[1, 0])).unwrap();
        let coeffs: Vec<BigInt> = pres
            .commutators()
            .flat_map(|r| match r {
                Relation::Commutator { u, v, terms, case: CommutatorCase::Product { n: 2 } }
                    if (*u, *v) == (u0, v0) =>
                {
                    terms.iter().map(|t| t.coefficient.clone()).collect()
                }
                _ => vec![],
            })
            .collect();
        assert_eq!(coeffs, vec![BigInt::from(-2), BigInt::from(-1)]);
        let checks = pi_check_symbolic(&tri, &t).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
    }

    #[test]
    fn pi_check_reports_failures() {
        let p = poly(&[&[0, 0], &[3, 0], &[1, 2], &[0, 1]]);
        let t = columns::column_vectors(&p);
        let mut pres = presentation(&t).unwrap();
        for r in pres.relations.iter_mut() {
            if let Relation::Commutator { terms, .. } = r {
                terms.clear();
            }
        }
        let r = IntegerRing;
        let checks = pi_check(&p, &t, &pres, &r, &BigInt::from(1), &BigInt::from(1)).unwrap();
        assert_eq!(checks.iter().filter(|c| !c.pass).count(), 2);
        assert!(checks.iter().any(|c| c.detail.is_some()));
    }

    #[test]
    fn index_sets() {
        let b = IndexModel::new(ModelClass::B, 2).unwrap();
        assert_eq!(b.size(), 4);
        assert_eq!(b.generators.len(), 2 + 4 + 2);
        let c = IndexModel::new(ModelClass::C, 1).unwrap();
        assert_eq!(c.size(), 3);
        assert_eq!(c.generators.len(), 1 + 2);
        let d = IndexModel::new(ModelClass::D { t: 1 }, 2).unwrap();
        assert_eq!(d.size(), 3);
        assert_eq!(d.generators.len(), 2 + 2);
        assert!(IndexModel::new(ModelClass::D { t: 0 }, 2).is_err());
        assert!(IndexModel::new(ModelClass::B, 0).is_err());
    }

    #[test]
    fn realization_is_unique() {
        let found = calibrate_realizations().unwrap();
        assert_eq!(
            found,
            vec![Realization {
                placement: Placement::Transposed,
                order: MatrixOrder::Reversed
            }]
        );
    }

    #[test]
    fn models_satisfy_relations() {
        for model in [
            IndexModel::new(ModelClass::B, 2).unwrap(),
            IndexModel::new(ModelClass::C, 1).unwrap(),
            IndexModel::new(ModelClass::D { t: 1 }, 2).unwrap(),
        ] {
            let rep = check_model(&model, &[4]).unwrap();
            assert!(rep.pass(), "{rep:?}");
        }
    }

    #[test]
    fn subgroups_and_centrality() {
        for model in [
            IndexModel::new(ModelClass::B, 2).unwrap(),
            IndexModel::new(ModelClass::C, 2).unwrap(),
            IndexModel::new(ModelClass::D { t: 2 }, 2).unwrap(),
        ] {
            let rep = uv_subgroup_checks(&model, 4, 1).unwrap();
            assert!(rep.pass(), "{rep:?}");
        }
        let small = IndexModel::new(ModelClass::B, 1).unwrap();
        assert_eq!(
            centrality(&small, realization().unwrap().placement).unwrap(),
            Centrality::NotApplicable
        );
    }

    #[test]
    fn zones() {
        let z = SpecquadModel::new(5, 3).unwrap();
        assert!(z.admissible(1, 2));
        assert_eq!(z.zone(1, 2), Some(1));
        assert!(!z.admissible(2, 5));
        assert!((1..=5).all(|i| !z.admissible(i, i)));
        let z6 = SpecquadModel::new(6, 3).unwrap();
        assert_eq!(z6.composability_failures(), vec![(1, 2), (2, 1)]);
        assert!(SpecquadModel::new(7, 4).unwrap().composability_failures().is_empty());
        assert!(SpecquadModel::new(3, 3).is_err());
    }

    #[test]
    fn composability_needs_a_third_index() {
        for m in 3..=8 {
            for j0 in 2..m {
                let z = SpecquadModel::new(m, j0).unwrap();
                if j0 >= 4 && m - j0 >= 3 {
                    assert!(z.composability_failures().is_empty(), "m={m} j0={j0}");
                }
            }
        }
    }

    #[test]
    fn zones_match_quadrangle_columns() {
        // a = (0,1), b = (0,0), c = (1,0) with m = 3, j0 = 2.
        let p = poly(&[&[0, 0], &[3, 0], &[1, 2], &[0, 1]]);
        let t = columns::column_vectors(&p);
        let pts: Vec<Vec<BigInt>> = [[0, 1], [0, 0], [1, 0]].iter().map(|x| scalar::vec_from(x)).collect();
        let z = SpecquadModel::new(3, 2).unwrap();
        let diffs: BTreeSet<Vec<BigInt>> = z
            .pairs()
            .iter()
            .map(|&(a, b)| scalar::sub(&pts[a - 1], &pts[b - 1]))
            .collect();
        let cols: BTreeSet<Vec<BigInt>> = t.columns.iter().map(|c| c.v.clone()).collect();
        assert_eq!(diffs, cols);
    }
}
