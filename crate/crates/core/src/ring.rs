//! Commutative coefficient rings with exact equality: the integers, the
//! integers modulo `m`, and Laurent polynomials over the integers in named
//! indeterminates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A commutative ring given by a runtime context.
pub trait Ring: Clone + fmt::Debug {
    type Elem: Clone + fmt::Debug + PartialEq + Eq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Inverse of `a` when it is a unit that the ring can recognize.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Named indeterminate, for polynomial rings.
    fn var(&self, name: &str) -> Result<Self::Elem>;
    fn render(&self, a: &Self::Elem) -> String;
    fn describe(&self) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn pow(&self, a: &Self::Elem, k: u64) -> Self::Elem {
        let mut out = self.one();
        let mut base = a.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = self.mul(&out, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        out
    }

    /// Parse a sum of products of integers and indeterminates, such as
    /// `-2*lambda*mu^2 + 3`.
    fn parse(&self, s: &str) -> Result<Self::Elem> {
        let mut acc = self.zero();
        for term in parse_expression(s)? {
            let mut t = self.from_int(&term.coefficient);
            for (name, e) in &term.factors {
                let x = self.var(name)?;
                let x = if *e < 0 {
                    self.unit_inverse(&x)
                        .ok_or_else(|| Error::Ring(format!("{name} is not invertible")))?
                } else {
                    x
                };
                t = self.mul(&t, &self.pow(&x, e.unsigned_abs()));
            }
            acc = self.add(&acc, &t);
        }
        Ok(acc)
    }
}

/// The integers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegerRing;

impl Ring for IntegerRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn unit_inverse(&self, a: &BigInt) -> Option<BigInt> {
        (a.abs().is_one()).then(|| a.clone())
    }
    fn var(&self, name: &str) -> Result<BigInt> {
        Err(Error::Ring(format!("the integers have no indeterminate {name}")))
    }
    fn render(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn describe(&self) -> String {
        "int".into()
    }
}

/// The integers modulo `m`, elements kept in `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModRing {
    modulus: BigInt,
}

impl ModRing {
    pub fn new(modulus: BigInt) -> Result<Self> {
        if modulus < BigInt::from(2) {
            return Err(Error::Ring(format!("modulus {modulus} must be at least 2")));
        }
        Ok(ModRing { modulus })
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// All residues `0..m`.
    pub fn elements(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        let mut k = BigInt::zero();
        while k < self.modulus {
            out.push(k.clone());
            k += 1;
        }
        out
    }
}

impl Ring for ModRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.mod_floor(&self.modulus)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a + b).mod_floor(&self.modulus)
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        (-a).mod_floor(&self.modulus)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b).mod_floor(&self.modulus)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn unit_inverse(&self, a: &BigInt) -> Option<BigInt> {
        let e = a.extended_gcd(&self.modulus);
        e.gcd.is_one().then(|| e.x.mod_floor(&self.modulus))
    }
    fn var(&self, name: &str) -> Result<BigInt> {
        Err(Error::Ring(format!("Z/{} has no indeterminate {name}", self.modulus)))
    }
    fn render(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn describe(&self) -> String {
        format!("mod:{}", self.modulus)
    }
}

/// Laurent polynomial: exponent vector to nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl Poly {
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &[i64]) -> BigInt {
        self.terms.get(exponent).cloned().unwrap_or_default()
    }

    fn insert(&mut self, e: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }
}

/// Laurent polynomials over the integers in named indeterminates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().trim().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::Ring(format!("bad indeterminate name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::Ring(format!("indeterminate {v} listed twice")));
            }
        }
        Ok(PolyRing { vars })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    fn constant(&self, c: BigInt) -> Poly {
        let mut p = Poly::default();
        p.insert(vec![0; self.vars.len()], c);
        p
    }
}

impl Ring for PolyRing {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::default()
    }
    fn one(&self) -> Poly {
        self.constant(BigInt::one())
    }
    fn from_int(&self, n: &BigInt) -> Poly {
        self.constant(n.clone())
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = a.clone();
        for (e, c) in &b.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }
    fn neg(&self, a: &Poly) -> Poly {
        Poly {
            terms: a.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(e, ca * cb);
            }
        }
        out
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.terms.is_empty()
    }
    fn unit_inverse(&self, a: &Poly) -> Option<Poly> {
        if a.terms.len() != 1 {
            return None;
        }
        let (e, c) = a.terms.iter().next().expect("one term");
        if !c.abs().is_one() {
            return None;
        }
        let mut p = Poly::default();
        p.insert(e.iter().map(|x| -x).collect(), c.clone());
        Some(p)
    }
    fn var(&self, name: &str) -> Result<Poly> {
        let i = self
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Ring(format!("unknown indeterminate {name}")))?;
        let mut e = vec![0; self.vars.len()];
        e[i] = 1;
        let mut p = Poly::default();
        p.insert(e, BigInt::one());
        Ok(p)
    }
    fn render(&self, a: &Poly) -> String {
        if a.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // Highest total degree first reads more naturally.
        let mut terms: Vec<_> = a.terms.iter().collect();
        terms.sort_by(|x, y| {
            let dx: i64 = x.0.iter().sum();
            let dy: i64 = y.0.iter().sum();
            dy.cmp(&dx).then(y.0.cmp(x.0))
        });
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(x, _)| **x != 0)
                .map(|(x, v)| if *x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&format!("{abs}*"));
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
    fn describe(&self) -> String {
        format!("poly:{}", self.vars.join(","))
    }
}

/// A ring descriptor as accepted on the command line: `int`, `mod:<m>` or
/// `poly:<names>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Integers,
    Modular(BigInt),
    Polynomial(Vec<String>),
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "int" {
            return Ok(RingSpec::Integers);
        }
        if let Some(m) = s.strip_prefix("mod:") {
            let m: BigInt = m
                .trim()
                .parse()
                .map_err(|_| Error::Ring(format!("bad modulus in {s:?}")))?;
            ModRing::new(m.clone())?;
            return Ok(RingSpec::Modular(m));
        }
        if let Some(vars) = s.strip_prefix("poly:") {
            let vars: Vec<String> = vars.split(',').map(|v| v.trim().to_string()).collect();
            PolyRing::new(&vars)?;
            return Ok(RingSpec::Polynomial(vars));
        }
        Err(Error::Ring(format!(
            "unknown ring {s:?}; expected int, mod:<m> or poly:<names>"
        )))
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "int"),
            RingSpec::Modular(m) => write!(f, "mod:{m}"),
            RingSpec::Polynomial(v) => write!(f, "poly:{}", v.join(",")),
        }
    }
}

/// One signed product term of a parsed expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coefficient: BigInt,
    pub factors: Vec<(String, i64)>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parse `term (('+'|'-') term)*` with `term = factor ('*' factor)*` and
/// `factor = integer | name | name '^' integer`.
pub fn parse_expression(s: &str) -> Result<Vec<Term>> {
    let bad = || Error::Parse(format!("cannot parse ring element {s:?}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut prev: Option<char> = None;
    for c in compact.chars() {
        // A sign right after '^' belongs to the exponent.
        if (c == '+' || c == '-') && prev != Some('^') {
            if !current.is_empty() {
                pieces.push((negative, std::mem::take(&mut current)));
                negative = false;
            } else if prev.is_some() && prev != Some('+') && prev != Some('-') {
                return Err(bad());
            }
            if c == '-' {
                negative = !negative;
            }
        } else {
            current.push(c);
        }
        prev = Some(c);
    }
    if current.is_empty() {
        return Err(bad());
    }
    pieces.push((negative, current));
    let mut out = Vec::new();
    for (neg, piece) in pieces {
        let mut coefficient = BigInt::one();
        let mut factors = Vec::new();
        for f in piece.split('*') {
            if f.is_empty() {
                return Err(bad());
            }
            if f.chars().all(|c| c.is_ascii_digit()) {
                coefficient *= f.parse::<BigInt>().map_err(|_| bad())?;
                continue;
            }
            let (name, exp) = match f.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| bad())?),
                None => (f, 1),
            };
            if !is_identifier(name) {
                return Err(bad());
            }
            factors.push((name.to_string(), exp));
        }
        if neg {
            coefficient = -coefficient;
        }
        out.push(Term {
            coefficient,
            factors,
        });
    }
    Ok(out)
}

/// `C(n, k)` for `0 <= k <= n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_arithmetic() {
        let r = ModRing::new(BigInt::from(4)).unwrap();
        assert_eq!(r.from_i64(-1), BigInt::from(3));
        assert_eq!(r.mul(&BigInt::from(2), &BigInt::from(2)), BigInt::zero());
        assert_eq!(r.unit_inverse(&BigInt::from(3)), Some(BigInt::from(3)));
        assert_eq!(r.unit_inverse(&BigInt::from(2)), None);
        assert!(ModRing::new(BigInt::one()).is_err());
        assert_eq!(r.elements().len(), 4);
    }

    #[test]
    fn polynomial_arithmetic() {
        let r = PolyRing::new(&["lambda", "mu"]).unwrap();
        let l = r.var("lambda").unwrap();
        let m = r.var("mu").unwrap();
        let s = r.add(&l, &m);
        let sq = r.mul(&s, &s);
        assert_eq!(r.render(&sq), "lambda^2 + 2*lambda*mu + mu^2");
        assert!(r.is_zero(&r.sub(&sq, &sq)));
        let inv = r.unit_inverse(&l).unwrap();
        assert_eq!(r.mul(&inv, &l), r.one());
        assert_eq!(r.unit_inverse(&s), None);
        assert_eq!(r.parse("-2*lambda*mu^2 + 3").unwrap(), {
            let t = r.mul(&r.from_i64(-2), &r.mul(&l, &r.pow(&m, 2)));
            r.add(&t, &r.from_i64(3))
        });
        assert_eq!(r.parse("lambda^-1").unwrap(), inv);
        assert!(r.parse("nu").is_err());
        assert!(r.parse("2*").is_err());
        assert!(r.parse("").is_err());
    }

    #[test]
    fn integer_parse() {
        let r = IntegerRing;
        assert_eq!(r.parse("-3 + 5*2").unwrap(), BigInt::from(7));
        assert_eq!(r.parse("--1").unwrap(), BigInt::from(1));
        assert!(r.parse("x").is_err());
    }

    #[test]
    fn ring_specs() {
        assert_eq!("int".parse::<RingSpec>().unwrap(), RingSpec::Integers);
        assert_eq!(
            "mod:4".parse::<RingSpec>().unwrap(),
            RingSpec::Modular(BigInt::from(4))
        );
        assert_eq!(
            "poly:lambda,mu".parse::<RingSpec>().unwrap().to_string(),
            "poly:lambda,mu"
        );
        assert!("mod:1".parse::<RingSpec>().is_err());
        assert!("poly:a,a".parse::<RingSpec>().is_err());
        assert!("real".parse::<RingSpec>().is_err());
    }

    #[test]
    fn binomials() {
        let row: Vec<BigInt> = (0..=4).map(|k| binomial(4, k)).collect();
        assert_eq!(row, [1, 4, 6, 4, 1].map(BigInt::from));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }
}
