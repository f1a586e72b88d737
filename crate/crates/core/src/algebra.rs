//! Elements of the polytopal semigroup algebra `R[P]`, words in elementary
//! and toric automorphisms, and exact checks of the commutator formulas.
//!
//! A monomial is an exponent in `Z^(dim+1)`: a lattice point `x` is
//! `(x, 1)`, a column vector `v` acts as `(v, 0)`. The last coordinate is
//! the degree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::columns::{self, ColumnTable};
use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::ring::{binomial, IntegerRing, PolyRing, Ring};
use crate::scalar::{self, Scalar};

/// Finite `R`-linear combination of monomials; zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element<T, E> {
    terms: BTreeMap<Vec<T>, E>,
}

impl<T: Scalar, E: Clone + PartialEq + Eq + fmt::Debug> Element<T, E> {
    pub fn zero() -> Self {
        Element {
            terms: BTreeMap::new(),
        }
    }

    /// The degree-one monomial of a lattice point.
    pub fn point<R: Ring<Elem = E>>(ring: &R, x: &[T]) -> Self {
        Self::monomial(ring, scalar::extend(x, T::one()))
    }

    pub fn monomial<R: Ring<Elem = E>>(ring: &R, exponent: Vec<T>) -> Self {
        let mut e = Self::zero();
        e.add_term(ring, exponent, ring.one());
        e
    }

    pub fn add_term<R: Ring<Elem = E>>(&mut self, ring: &R, exponent: Vec<T>, c: E) {
        if ring.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&exponent) {
            Some(old) => {
                let sum = ring.add(old, &c);
                if ring.is_zero(&sum) {
                    self.terms.remove(&exponent);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(exponent, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<T>, &E)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponent: &[T]) -> Option<&E> {
        self.terms.get(exponent)
    }

    /// The common degree of all monomials, if there is one.
    pub fn degree(&self) -> Option<T> {
        let mut degrees = self.terms.keys().map(|k| k.last().cloned());
        let first = degrees.next()??;
        degrees.all(|d| d.as_ref() == Some(&first)).then_some(first)
    }

    pub fn scaled<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(ring, k.clone(), ring.mul(v, c));
        }
        out
    }

    pub fn render<R: Ring<Elem = E>>(&self, ring: &R) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(k, c)| format!("({})*{}", ring.render(c), scalar::fmt_vec(k)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// One automorphism letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter<T, E> {
    /// `e_v^lambda`: `x -> (1 + lambda v)^{ht_v(x)} x`.
    Elementary { v: Vec<T>, lambda: E },
    /// Monomial scaling by a character given on the standard basis of
    /// `Z^(dim+1)`, together with the inverse values.
    Toric { values: Vec<E>, inverses: Vec<E> },
}

impl<T: Scalar, E: Clone + PartialEq + Eq + fmt::Debug> Letter<T, E> {
    pub fn elementary(v: Vec<T>, lambda: E) -> Self {
        Letter::Elementary { v, lambda }
    }

    pub fn toric<R: Ring<Elem = E>>(ring: &R, values: Vec<E>) -> Result<Self> {
        let inverses = values
            .iter()
            .map(|a| {
                ring.unit_inverse(a)
                    .ok_or_else(|| Error::Ring(format!("{} is not a unit", ring.render(a))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Letter::Toric { values, inverses })
    }

    pub fn inverse<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        match self {
            Letter::Elementary { v, lambda } => Letter::Elementary {
                v: v.clone(),
                lambda: ring.neg(lambda),
            },
            Letter::Toric { values, inverses } => Letter::Toric {
                values: inverses.clone(),
                inverses: values.clone(),
            },
        }
    }

    pub fn render<R: Ring<Elem = E>>(&self, ring: &R) -> String {
        match self {
            Letter::Elementary { v, lambda } => {
                format!("e_{}^({})", scalar::fmt_vec(v), ring.render(lambda))
            }
            Letter::Toric { values, .. } => format!(
                "toric[{}]",
                values.iter().map(|a| ring.render(a)).collect::<Vec<_>>().join(", ")
            ),
        }
    }
}

/// A word `l_1 ∘ l_2 ∘ ... ∘ l_k`: as a map, `l_k` is applied first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word<T, E> {
    pub letters: Vec<Letter<T, E>>,
}

impl<T: Scalar, E: Clone + PartialEq + Eq + fmt::Debug> Word<T, E> {
    pub fn identity() -> Self {
        Word { letters: vec![] }
    }

    pub fn single(l: Letter<T, E>) -> Self {
        Word { letters: vec![l] }
    }

    pub fn elementary(v: Vec<T>, lambda: E) -> Self {
        Self::single(Letter::elementary(v, lambda))
    }

    /// `self ∘ other`
    pub fn then_apply_after(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }
    }

    pub fn compose(words: &[&Self]) -> Self {
        Word {
            letters: words.iter().flat_map(|w| w.letters.iter().cloned()).collect(),
        }
    }

    pub fn inverse<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse(ring)).collect(),
        }
    }

    pub fn power(&self, k: usize) -> Self {
        Word {
            letters: (0..k).flat_map(|_| self.letters.iter().cloned()).collect(),
        }
    }

    pub fn render<R: Ring<Elem = E>>(&self, ring: &R) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        self.letters
            .iter()
            .map(|l| l.render(ring))
            .collect::<Vec<_>>()
            .join(" ∘ ")
    }
}

fn in_dilate<T: Scalar>(p: &Polytope<T>, m: &[T]) -> bool {
    let (z, d) = m.split_at(p.dim());
    let d = &d[0];
    p.facets()
        .iter()
        .all(|f| scalar::dot(&f.normal, z) >= f.offset.clone() * d.clone())
}

/// Apply `e_v^lambda` to an element: the monomial `(z, d)` goes to
/// `sum_i C(h, i) lambda^i (z + i v, d)` with `h = <a, z> - d b` for the
/// base facet form `(a, b)` of `v`.
pub fn apply_elementary<T: Scalar, R: Ring>(
    p: &Polytope<T>,
    ring: &R,
    v: &[T],
    lambda: &R::Elem,
    e: &Element<T, R::Elem>,
) -> Result<Element<T, R::Elem>> {
    let base = columns::base_facet(p, v).ok_or_else(|| Error::NotAColumn(scalar::fmt_vec(v)))?;
    let f = &p.facets()[base];
    let dv = scalar::extend(v, T::zero());
    let mut out = Element::zero();
    for (m, c) in e.terms() {
        if m.len() != p.dim() + 1 {
            return Err(Error::Dimension(format!(
                "monomial {} in dimension {}",
                scalar::fmt_vec(m),
                p.dim()
            )));
        }
        let (z, d) = m.split_at(p.dim());
        let h = scalar::dot(&f.normal, z) - f.offset.clone() * d[0].clone();
        let h = h
            .to_u64()
            .ok_or_else(|| Error::Precondition(format!("monomial {} below the base facet", scalar::fmt_vec(m))))?;
        let mut lam_i = ring.one();
        let mut mono = m.clone();
        for i in 0..=h {
            let coeff = ring.mul(&ring.mul(c, &ring.from_int(&binomial(h, i))), &lam_i);
            if !in_dilate(p, &mono) {
                return Err(Error::Internal(format!(
                    "image monomial {} leaves the polytope",
                    scalar::fmt_vec(&mono)
                )));
            }
            out.add_term(ring, mono.clone(), coeff);
            lam_i = ring.mul(&lam_i, lambda);
            mono = scalar::add(&mono, &dv);
        }
    }
    Ok(out)
}

fn character<T: Scalar, R: Ring>(ring: &R, values: &[R::Elem], inverses: &[R::Elem], m: &[T]) -> Result<R::Elem> {
    if values.len() != m.len() {
        return Err(Error::Dimension("character length".into()));
    }
    let mut out = ring.one();
    for (i, k) in m.iter().enumerate() {
        let k = k
            .to_i64()
            .ok_or_else(|| Error::Precondition("exponent out of range".into()))?;
        let base = if k < 0 { &inverses[i] } else { &values[i] };
        out = ring.mul(&out, &ring.pow(base, k.unsigned_abs()));
    }
    Ok(out)
}

pub fn apply_letter<T: Scalar, R: Ring>(
    p: &Polytope<T>,
    ring: &R,
    l: &Letter<T, R::Elem>,
    e: &Element<T, R::Elem>,
) -> Result<Element<T, R::Elem>> {
    match l {
        Letter::Elementary { v, lambda } => apply_elementary(p, ring, v, lambda, e),
        Letter::Toric { values, inverses } => {
            let mut out = Element::zero();
            for (m, c) in e.terms() {
                let chi = character(ring, values, inverses, m)?;
                out.add_term(ring, m.clone(), ring.mul(c, &chi));
            }
            Ok(out)
        }
    }
}

/// Apply a word as a composition: the last letter acts first.
pub fn apply_word<T: Scalar, R: Ring>(
    p: &Polytope<T>,
    ring: &R,
    w: &Word<T, R::Elem>,
    e: &Element<T, R::Elem>,
) -> Result<Element<T, R::Elem>> {
    let mut cur = e.clone();
    for l in w.letters.iter().rev() {
        cur = apply_letter(p, ring, l, &cur)?;
    }
    Ok(cur)
}

/// Images of all degree-one monomials, in lattice-point order.
pub fn word_images<T: Scalar, R: Ring>(
    p: &Polytope<T>,
    ring: &R,
    w: &Word<T, R::Elem>,
) -> Result<Vec<Element<T, R::Elem>>> {
    p.lattice_points()
        .iter()
        .map(|x| apply_word(p, ring, w, &Element::point(ring, x)))
        .collect()
}

/// Two words agree as automorphisms iff they agree on the degree-one
/// monomials, which generate `R[P]`.
pub fn words_equal<T: Scalar, R: Ring>(
    p: &Polytope<T>,
    ring: &R,
    w1: &Word<T, R::Elem>,
    w2: &Word<T, R::Elem>,
) -> Result<bool> {
    for x in p.lattice_points() {
        let m = Element::point(ring, x);
        if apply_word(p, ring, w1, &m)? != apply_word(p, ring, w2, &m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Order of the two factors inside a commutator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bracket {
    /// `[a, b] = a b a^-1 b^-1`
    Leading,
    /// `[a, b] = a^-1 b^-1 a b`
    Trailing,
}

/// How a formal product of automorphisms is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    /// `a b` is the composition `a ∘ b`.
    Composition,
    /// `a b` means apply `a`, then `b`.
    Sequential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Convention {
    pub bracket: Bracket,
    pub order: Order,
}

impl Convention {
    pub const ALL: [Convention; 4] = [
        Convention { bracket: Bracket::Leading, order: Order::Composition },
        Convention { bracket: Bracket::Leading, order: Order::Sequential },
        Convention { bracket: Bracket::Trailing, order: Order::Composition },
        Convention { bracket: Bracket::Trailing, order: Order::Sequential },
    ];

    /// The formal product `w_1 w_2 ... w_k` as a composition word.
    pub fn product<T: Scalar, E: Clone + PartialEq + Eq + fmt::Debug>(
        &self,
        words: &[&Word<T, E>],
    ) -> Word<T, E> {
        match self.order {
            Order::Composition => Word::compose(words),
            Order::Sequential => {
                let rev: Vec<&Word<T, E>> = words.iter().rev().copied().collect();
                Word::compose(&rev)
            }
        }
    }

    pub fn commutator<T: Scalar, R: Ring>(
        &self,
        ring: &R,
        a: &Word<T, R::Elem>,
        b: &Word<T, R::Elem>,
    ) -> Word<T, R::Elem> {
        let ai = a.inverse(ring);
        let bi = b.inverse(ring);
        match self.bracket {
            Bracket::Leading => self.product(&[a, b, &ai, &bi]),
            Bracket::Trailing => self.product(&[&ai, &bi, a, b]),
        }
    }
}

/// Which branch of the commutator formula applies to a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CommutatorCase {
    /// `uv` exists; `n = <base(v), u>`.
    Product { n: u64 },
    /// `vu` exists; `n = <base(u), v>`.
    ReverseProduct { n: u64 },
    /// `u + v` is not a column vector.
    Trivial,
}

impl fmt::Display for CommutatorCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommutatorCase::Product { n } => write!(f, "uv exists, n={n}"),
            CommutatorCase::ReverseProduct { n } => write!(f, "vu exists, n={n}"),
            CommutatorCase::Trivial => write!(f, "u+v not a column"),
        }
    }
}

/// Classify the pair `(u, v)` of table columns.
pub fn commutator_case<T: Scalar>(t: &ColumnTable<T>, u: usize, v: usize) -> Result<CommutatorCase> {
    let cu = t.get(u);
    let cv = t.get(v);
    if scalar::is_zero_vec(&scalar::add(&cu.v, &cv.v)) {
        return Err(Error::Precondition("u + v = 0".into()));
    }
    let to_n = |x: &T| -> Result<u64> {
        x.to_u64()
            .ok_or_else(|| Error::Internal("negative product exponent".into()))
    };
    if t.product(u, v).is_some() {
        return Ok(CommutatorCase::Product { n: to_n(t.height(u, cv.base))? });
    }
    if t.product(v, u).is_some() {
        return Ok(CommutatorCase::ReverseProduct { n: to_n(t.height(v, cu.base))? });
    }
    if t.index_of(&scalar::add(&cu.v, &cv.v)).is_some() {
        return Err(Error::Internal(
            "u + v is a column but neither product exists".into(),
        ));
    }
    Ok(CommutatorCase::Trivial)
}

/// The right-hand side of the commutator formula for `[e_u^lambda, e_v^mu]`.
pub fn commutator_rhs<T: Scalar, R: Ring>(
    t: &ColumnTable<T>,
    u: usize,
    v: usize,
    ring: &R,
    lambda: &R::Elem,
    mu: &R::Elem,
) -> Result<(CommutatorCase, Word<T, R::Elem>)> {
    let case = commutator_case(t, u, v)?;
    let (a, b, la, lb, sign, n) = match case {
        CommutatorCase::Trivial => return Ok((case, Word::identity())),
        CommutatorCase::Product { n } => (u, v, lambda, mu, -1, n),
        CommutatorCase::ReverseProduct { n } => (v, u, mu, lambda, 1, n),
    };
    let mut letters = Vec::new();
    let va = &t.get(a).v;
    let vb = &t.get(b).v;
    for i in 1..=n {
        let w = scalar::add_scaled(va, &T::from_u64(i).expect("small"), vb);
        if t.index_of(&w).is_none() {
            return Err(Error::Internal(format!("{} is not a column", scalar::fmt_vec(&w))));
        }
        let c = ring.mul(
            &ring.from_int(&(binomial(n, i) * BigInt::from(sign))),
            &ring.mul(la, &ring.pow(lb, i)),
        );
        letters.push(Letter::elementary(w, c));
    }
    Ok((case, Word { letters }))
}

fn symbolic_ring() -> PolyRing {
    PolyRing::new(&["lambda", "mu"]).expect("valid names")
}

fn comrel_holds<T: Scalar>(
    p: &Polytope<T>,
    t: &ColumnTable<T>,
    u: usize,
    v: usize,
    conv: Convention,
) -> Result<bool> {
    let r = symbolic_ring();
    let (l, m) = (r.var("lambda")?, r.var("mu")?);
    let a = Word::elementary(t.get(u).v.clone(), l.clone());
    let b = Word::elementary(t.get(v).v.clone(), m.clone());
    let (_, rhs) = commutator_rhs(t, u, v, &r, &l, &m)?;
    words_equal(p, &r, &conv.commutator(&r, &a, &b), &rhs)
}

/// The calibration polytopes: the quadrangle with three columns and one
/// product, and the triangle with `n = 2`.
pub fn calibration_cases() -> Vec<(Polytope<BigInt>, Vec<i64>, Vec<i64>)> {
    let quad = Polytope::from_vertices(&[
        scalar::vec_from(&[0, 0]),
        scalar::vec_from(&[3, 0]),
        scalar::vec_from(&[1, 2]),
        scalar::vec_from(&[0, 1]),
    ])
    .expect("valid");
    let tri = Polytope::from_vertices(&[
        scalar::vec_from(&[0, 0]),
        scalar::vec_from(&[2, 0]),
        scalar::vec_from(&[0, 1]),
    ])
    .expect("valid");
    vec![(quad, vec![0, -1], vec![1, 0]), (tri, vec![0, -1], vec![1, 0])]
}

/// Find the conventions under which the commutator formula holds on both
/// calibration cases.
pub fn calibrate_conventions() -> Result<Vec<Convention>> {
    let mut ok = Vec::new();
    for conv in Convention::ALL {
        let mut all = true;
        for (p, u, v) in calibration_cases() {
            let t = columns::column_vectors(&p);
            let ui = t.index_of(&scalar::vec_from(&u)).ok_or(Error::NotAColumn("u".into()))?;
            let vi = t.index_of(&scalar::vec_from(&v)).ok_or(Error::NotAColumn("v".into()))?;
            all &= comrel_holds(&p, &t, ui, vi, conv)?;
        }
        if all {
            ok.push(conv);
        }
    }
    Ok(ok)
}

/// The calibrated convention, computed once and asserted unique.
pub fn convention() -> Result<Convention> {
    static CONV: OnceLock<std::result::Result<Convention, String>> = OnceLock::new();
    CONV.get_or_init(|| match calibrate_conventions() {
        Ok(v) if v.len() == 1 => Ok(v[0]),
        Ok(v) => Err(format!("{} conventions fit the calibration cases", v.len())),
        Err(e) => Err(e.to_string()),
    })
    .clone()
    .map_err(Error::Internal)
}

/// Outcome of one commutator check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComrelReport {
    pub u: String,
    pub v: String,
    pub case: CommutatorCase,
    pub rhs: String,
    pub pass: bool,
}

/// Check `[e_u^lambda, e_v^mu]` against the formula with the calibrated
/// convention.
pub fn verify_comrel<T: Scalar, R: Ring>(
    p: &Polytope<T>,
    t: &ColumnTable<T>,
    u: usize,
    v: usize,
    ring: &R,
    lambda: &R::Elem,
    mu: &R::Elem,
) -> Result<ComrelReport> {
    let conv = convention()?;
    let a = Word::elementary(t.get(u).v.clone(), lambda.clone());
    let b = Word::elementary(t.get(v).v.clone(), mu.clone());
    let (case, rhs) = commutator_rhs(t, u, v, ring, lambda, mu)?;
    let pass = words_equal(p, ring, &conv.commutator(ring, &a, &b), &rhs)?;
    Ok(ComrelReport {
        u: scalar::fmt_vec(&t.get(u).v),
        v: scalar::fmt_vec(&t.get(v).v),
        case,
        rhs: rhs.render(ring),
        pass,
    })
}

/// [`verify_comrel`] over `Z[lambda, mu]` with the indeterminates as
/// arguments.
pub fn verify_comrel_symbolic<T: Scalar>(
    p: &Polytope<T>,
    t: &ColumnTable<T>,
    u: usize,
    v: usize,
) -> Result<ComrelReport> {
    let r = symbolic_ring();
    let (l, m) = (r.var("lambda")?, r.var("mu")?);
    verify_comrel(p, t, u, v, &r, &l, &m)
}

/// Every ordered pair with `u + v != 0`.
pub fn verify_comrel_all<T: Scalar>(p: &Polytope<T>, t: &ColumnTable<T>) -> Result<Vec<ComrelReport>> {
    let mut out = Vec::new();
    for u in 0..t.len() {
        for v in 0..t.len() {
            if u == v || scalar::is_zero_vec(&scalar::add(&t.get(u).v, &t.get(v).v)) {
                continue;
            }
            out.push(verify_comrel_symbolic(p, t, u, v)?);
        }
    }
    Ok(out)
}

/// Result of checking that columns with a common base facet give an
/// embedding of the additive group `R^s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub facet: usize,
    pub columns: Vec<String>,
    pub commute: bool,
    pub homomorphism: bool,
    pub inverse_formula: bool,
    pub injective_symbolic: bool,
    pub injective_sample: bool,
    pub samples: usize,
}

impl EmbeddingReport {
    pub fn pass(&self) -> bool {
        self.commute
            && self.homomorphism
            && self.inverse_formula
            && self.injective_symbolic
            && self.injective_sample
    }
}

fn embedding_word<T: Scalar, R: Ring>(vs: &[Vec<T>], lams: &[R::Elem]) -> Word<T, R::Elem> {
    Word {
        letters: vs
            .iter()
            .zip(lams)
            .map(|(v, l)| Letter::elementary(v.clone(), l.clone()))
            .collect(),
    }
}

/// Check the additive embedding `(lambda_i) -> e_{v_1}^{lambda_1} ∘ ... ∘
/// e_{v_s}^{lambda_s}` for the columns with base `facet`.
pub fn same_base_embedding_check<T: Scalar>(
    p: &Polytope<T>,
    t: &ColumnTable<T>,
    facet: usize,
    seed: u64,
) -> Result<EmbeddingReport> {
    let idx = t.with_base(facet);
    if idx.is_empty() {
        return Err(Error::Precondition(format!("no column has base facet {facet}")));
    }
    let vs: Vec<Vec<T>> = idx.iter().map(|&i| t.get(i).v.clone()).collect();
    let s = vs.len();
    let names: Vec<String> = (0..2 * s).map(|i| format!("x{i}")).collect();
    let r = PolyRing::new(&names)?;
    let xs: Vec<_> = names.iter().map(|n| r.var(n)).collect::<Result<_>>()?;
    let (lam, mu) = xs.split_at(s);

    let mut commute = true;
    for i in 0..s {
        for j in (i + 1)..s {
            let a = Word::elementary(vs[i].clone(), lam[i].clone());
            let b = Word::elementary(vs[j].clone(), lam[j].clone());
            commute &= words_equal(p, &r, &a.then_apply_after(&b), &b.then_apply_after(&a))?;
        }
    }
    let phi_l = embedding_word::<T, PolyRing>(&vs, lam);
    let phi_m = embedding_word::<T, PolyRing>(&vs, mu);
    let sum: Vec<_> = lam.iter().zip(mu).map(|(a, b)| r.add(a, b)).collect();
    let homomorphism = words_equal(
        p,
        &r,
        &phi_l.then_apply_after(&phi_m),
        &embedding_word::<T, PolyRing>(&vs, &sum),
    )?;
    let neg: Vec<_> = lam.iter().map(|a| r.neg(a)).collect();
    let inverse_formula = words_equal(
        p,
        &r,
        &phi_l.inverse(&r),
        &embedding_word::<T, PolyRing>(&vs, &neg),
    )?;
    // lambda_i can be read off as the coefficient of x + v_i for any
    // lattice point x at height one over the base facet.
    let f = &p.facets()[facet];
    let mut injective_symbolic = true;
    match p.lattice_points().iter().find(|x| f.height(x).is_one()) {
        None => injective_symbolic = false,
        Some(x) => {
            let img = apply_word(p, &r, &phi_l, &Element::point(&r, x))?;
            for (v, l) in vs.iter().zip(lam) {
                let m = scalar::extend(&scalar::add(x, v), T::one());
                injective_symbolic &= img.coefficient(&m) == Some(l);
            }
        }
    }
    // Distinct integer tuples give distinct automorphisms.
    let zr = IntegerRing;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tuples: BTreeSet<Vec<i64>> = BTreeSet::new();
    tuples.insert(vec![0; s]);
    while tuples.len() < 24.min(5usize.pow(s as u32)) {
        tuples.insert((0..s).map(|_| rng.gen_range(-2..=2)).collect());
    }
    let mut seen: BTreeMap<Vec<Element<T, BigInt>>, Vec<i64>> = BTreeMap::new();
    let mut injective_sample = true;
    for tup in &tuples {
        let lams: Vec<BigInt> = tup.iter().map(|&k| BigInt::from(k)).collect();
        let imgs = word_images(p, &zr, &embedding_word::<T, IntegerRing>(&vs, &lams))?;
        if seen.insert(imgs, tup.clone()).is_some() {
            injective_sample = false;
        }
    }
    Ok(EmbeddingReport {
        facet,
        columns: vs.iter().map(|v| scalar::fmt_vec(v)).collect(),
        commute,
        homomorphism,
        inverse_formula,
        injective_symbolic,
        injective_sample,
        samples: tuples.len(),
    })
}

impl<T: Ord, E: Ord> PartialOrd for Element<T, E> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Ord, E: Ord> Ord for Element<T, E> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.terms.iter().cmp(other.terms.iter())
    }
}

/// Result of checking `alpha ∘ e_w^1 ∘ alpha^-1 = e_w^{alpha(w)}` for a
/// symbolic unit character `alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationReport {
    pub column: String,
    /// `alpha(w)` as computed from the first admissible point.
    pub ratio: String,
    /// Number of lattice points off the base facet used for the ratio.
    pub points_checked: usize,
    pub ratio_independent: bool,
    pub pass: bool,
}

/// The generic unit character with values `a1, ..., a_{dim+1}` on the
/// standard basis, over `Z[a_i^±1]`.
pub fn symbolic_character<T: Scalar>(dim: usize) -> Result<(PolyRing, Letter<T, crate::ring::Poly>)> {
    let names: Vec<String> = (1..=dim + 1).map(|i| format!("a{i}")).collect();
    let r = PolyRing::new(&names)?;
    let values = names.iter().map(|n| r.var(n)).collect::<Result<Vec<_>>>()?;
    let l = Letter::toric(&r, values)?;
    Ok((r, l))
}

pub fn conjugation_check<T: Scalar>(
    p: &Polytope<T>,
    t: &ColumnTable<T>,
    w: usize,
) -> Result<ConjugationReport> {
    let (r, alpha) = symbolic_character::<T>(p.dim())?;
    let (values, inverses) = match &alpha {
        Letter::Toric { values, inverses } => (values.clone(), inverses.clone()),
        Letter::Elementary { .. } => unreachable!(),
    };
    let col = t.get(w);
    let f = &p.facets()[col.base];
    let mut ratios = Vec::new();
    for z in p.lattice_points() {
        if f.height(z).is_zero() {
            continue;
        }
        let zw = scalar::extend(&scalar::add(z, &col.v), T::one());
        let z1 = scalar::extend(z, T::one());
        let num = character(&r, &values, &inverses, &zw)?;
        let den = character(&r, &values, &inverses, &z1)?;
        let den_inv = r
            .unit_inverse(&den)
            .ok_or_else(|| Error::Internal("character value not a unit".into()))?;
        ratios.push(r.mul(&num, &den_inv));
    }
    let first = ratios
        .first()
        .cloned()
        .ok_or_else(|| Error::Precondition("no lattice point off the base facet".into()))?;
    let ratio_independent = ratios.iter().all(|x| *x == first);
    let lhs = Word {
        letters: vec![
            alpha.clone(),
            Letter::elementary(col.v.clone(), r.one()),
            alpha.inverse(&r),
        ],
    };
    let rhs = Word::elementary(col.v.clone(), first.clone());
    let pass = ratio_independent && words_equal(p, &r, &lhs, &rhs)?;
    Ok(ConjugationReport {
        column: scalar::fmt_vec(&col.v),
        ratio: r.render(&first),
        points_checked: ratios.len(),
        ratio_independent,
        pass,
    })
}

/// `(e_v^1 ∘ e_{-v}^{-1} ∘ e_v^1)^2`, which acts on `2Δ₂` by a sign on
/// the middle layer.
pub fn sign_switch<T: Scalar, R: Ring>(ring: &R, v: &[T]) -> Word<T, R::Elem> {
    let one = ring.one();
    let w = Word {
        letters: vec![
            Letter::elementary(v.to_vec(), one.clone()),
            Letter::elementary(scalar::neg(v), ring.neg(&one)),
            Letter::elementary(v.to_vec(), one),
        ],
    };
    w.power(2)
}

/// How a word acts on one degree-one monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointAction {
    Fixed,
    Negated,
    Other,
}

/// The action of a word on every lattice point, in lattice-point order.
pub fn point_actions<T: Scalar, R: Ring>(
    p: &Polytope<T>,
    ring: &R,
    w: &Word<T, R::Elem>,
) -> Result<Vec<(Vec<T>, PointAction)>> {
    let mut out = Vec::new();
    for x in p.lattice_points() {
        let m = Element::point(ring, x);
        let img = apply_word(p, ring, w, &m)?;
        let act = if img == m {
            PointAction::Fixed
        } else if img == m.scaled(ring, &ring.neg(&ring.one())) {
            PointAction::Negated
        } else {
            PointAction::Other
        };
        out.push((x.clone(), act));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ModRing;

    fn poly(vs: &[&[i64]]) -> Polytope<BigInt> {
        Polytope::from_vertices(&vs.iter().map(|v| scalar::vec_from(v)).collect::<Vec<_>>())
            .unwrap()
    }

    fn v(xs: &[i64]) -> Vec<BigInt> {
        scalar::vec_from(xs)
    }

    #[test]
    fn elementary_on_triangle() {
        let p = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
        let r = IntegerRing;
        let e = Element::point(&r, &v(&[0, 1]));
        let img = apply_elementary(&p, &r, &v(&[1, 0]), &BigInt::from(1), &e).unwrap();
        let mut expect = Element::point(&r, &v(&[0, 1]));
        expect.add_term(&r, v(&[1, 1, 1]), BigInt::from(1));
        assert_eq!(img, expect);
        // lambda = 0 is the identity, and -lambda inverts.
        for x in p.lattice_points() {
            let m = Element::point(&r, x);
            let z = apply_elementary(&p, &r, &v(&[1, 0]), &BigInt::from(0), &m).unwrap();
            assert_eq!(z, m);
            let a = apply_elementary(&p, &r, &v(&[1, 0]), &BigInt::from(3), &m).unwrap();
            let b = apply_elementary(&p, &r, &v(&[1, 0]), &BigInt::from(-3), &a).unwrap();
            assert_eq!(b, m);
        }
        assert!(apply_elementary(&p, &r, &v(&[1, 1]), &BigInt::from(1), &e).is_err());
    }

    #[test]
    fn higher_degree_uses_linear_height() {
        let p = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
        let r = IntegerRing;
        // (0,2;2) sits at height 2 over the left edge in degree 2.
        let m = Element::monomial(&r, v(&[0, 2, 2]));
        let img = apply_elementary(&p, &r, &v(&[1, 0]), &BigInt::from(1), &m).unwrap();
        assert_eq!(img.len(), 3);
        assert_eq!(img.coefficient(&v(&[1, 2, 2])), Some(&BigInt::from(2)));
        assert_eq!(img.degree(), Some(BigInt::from(2)));
    }

    #[test]
    fn additivity_and_empty_word() {
        let p = poly(&[&[0, 0], &[3, 0], &[1, 2], &[0, 1]]);
        let r = PolyRing::new(&["lambda", "mu"]).unwrap();
        let (l, m) = (r.var("lambda").unwrap(), r.var("mu").unwrap());
        let t = columns::column_vectors(&p);
        for c in &t.columns {
            let a = Word::elementary(c.v.clone(), l.clone());
            let b = Word::elementary(c.v.clone(), m.clone());
            let ab = Word::elementary(c.v.clone(), r.add(&l, &m));
            assert!(words_equal(&p, &r, &a.then_apply_after(&b), &ab).unwrap());
            let trailing = a.then_apply_after(&Word::elementary(c.v.clone(), r.zero()));
            assert!(words_equal(&p, &r, &a, &trailing).unwrap());
        }
        assert!(words_equal(&p, &r, &Word::identity(), &Word::identity()).unwrap());
    }

    #[test]
    fn calibration_is_unique() {
        let found = calibrate_conventions().unwrap();
        assert_eq!(found.len(), 1, "{found:?}");
        assert_eq!(convention().unwrap(), found[0]);
    }

    #[test]
    fn commutator_examples() {
        let r = PolyRing::new(&["lambda", "mu"]).unwrap();
        let (l, m) = (r.var("lambda").unwrap(), r.var("mu").unwrap());
        let tri = poly(&[&[0, 0], &[2, 0], &[0, 1]]);
        let t = columns::column_vectors(&tri);
        let u = t.index_of(&v(&[0, -1])).unwrap();
        let w = t.index_of(&v(&[1, 0])).unwrap();
        let (case, rhs) = commutator_rhs(&t, u, w, &r, &l, &m).unwrap();
        assert_eq!(case, CommutatorCase::Product { n: 2 });
        assert_eq!(
            rhs.letters,
            vec![
                Letter::elementary(v(&[1, -1]), r.parse("-2*lambda*mu").unwrap()),
                Letter::elementary(v(&[2, -1]), r.parse("-lambda*mu^2").unwrap()),
            ]
        );
        assert!(verify_comrel_symbolic(&tri, &t, u, w).unwrap().pass);
        assert!(verify_comrel_symbolic(&tri, &t, w, u).unwrap().pass);

        let square = poly(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]);
        let t = columns::column_vectors(&square);
        let a = t.index_of(&v(&[1, 0])).unwrap();
        let b = t.index_of(&v(&[0, 1])).unwrap();
        let (case, rhs) = commutator_rhs(&t, a, b, &r, &l, &m).unwrap();
        assert_eq!(case, CommutatorCase::Trivial);
        assert!(rhs.letters.is_empty());
        let minus = t.index_of(&v(&[-1, 0])).unwrap();
        assert!(commutator_rhs(&t, a, minus, &r, &l, &m).is_err());
        assert!(verify_comrel_all(&square, &t).unwrap().iter().all(|c| c.pass));
    }

    #[test]
    fn sign_switch_on_doubled_segment() {
        let p = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
        let r = IntegerRing;
        let eps = sign_switch(&r, &v(&[1, 0]));
        for (x, act) in point_actions(&p, &r, &eps).unwrap() {
            let expect = if x[1] == BigInt::from(1) {
                PointAction::Negated
            } else {
                PointAction::Fixed
            };
            assert_eq!(act, expect, "at {x:?}");
        }
        let r2 = ModRing::new(BigInt::from(2)).unwrap();
        let eps2 = sign_switch(&r2, &v(&[1, 0]));
        assert!(words_equal(&p, &r2, &eps2, &Word::identity()).unwrap());
        assert!(!words_equal(&p, &r, &eps, &Word::identity()).unwrap());
    }

    #[test]
    fn toric_conjugation() {
        let p = poly(&[&[0, 0], &[3, 0], &[1, 2], &[0, 1]]);
        let t = columns::column_vectors(&p);
        for w in 0..t.len() {
            let rep = conjugation_check(&p, &t, w).unwrap();
            assert!(rep.pass, "{rep:?}");
            assert!(rep.points_checked > 1);
        }
        let rep = conjugation_check(&p, &t, t.index_of(&v(&[1, -1])).unwrap()).unwrap();
        assert_eq!(rep.ratio, "a1*a2^-1");
    }

    #[test]
    fn same_base_embedding() {
        let pd = poly(&[&[-1, 0], &[6, 0], &[4, 1], &[0, 2]]);
        let t = columns::column_vectors(&pd);
        let bases = t.base_facets();
        assert_eq!(bases.len(), 1);
        let f = *bases.iter().next().unwrap();
        assert_eq!(t.with_base(f).len(), 3);
        let rep = same_base_embedding_check(&pd, &t, f, 7).unwrap();
        assert!(rep.pass(), "{rep:?}");
        let d2 = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        let t = columns::column_vectors(&d2);
        for f in t.base_facets() {
            let rep = same_base_embedding_check(&d2, &t, f, 7).unwrap();
            assert!(rep.pass());
            assert_eq!(rep.columns.len(), 2);
        }
    }
}
