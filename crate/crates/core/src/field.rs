//! Finite fields GF(p^m) and the quadratic extension view GF(q^2) / GF(q).
//!
//! Elements are plain `u32` indices: the base-p digits of the index are the
//! coefficients of the residue polynomial, lowest degree first. Arithmetic runs
//! on log/antilog tables with Zech logarithms for addition, so every operation
//! is O(1) once the field is built.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A field element, as an index in `[0, q)`.
pub type Elem = u32;

/// Largest field order accepted by [`Field::new`].
pub const MAX_ORDER: u64 = 1 << 20;

const ADD_TABLE_MAX: u32 = 512;
const NONE: u32 = u32::MAX;

/// Serializable description of a field: characteristic, degree and modulus
/// coefficients (low to high, monic).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn order(&self) -> u32 {
        self.p.pow(self.m)
    }
}

pub struct Field {
    spec: FieldSpec,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
    generator: Elem,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GF({}^{}) mod {:?}",
            self.spec.p, self.spec.m, self.spec.modulus
        )
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

/// Build GF(p^m) with the least monic irreducible modulus.
pub fn make_field(p: u32, m: u32) -> Result<Arc<Field>> {
    Field::new(p, m)
}

impl Field {
    pub fn new(p: u32, m: u32) -> Result<Arc<Field>> {
        check_params(p, m)?;
        let modulus = least_irreducible(p, m);
        Self::build(p, m, modulus)
    }

    /// Build GF(p^m) from an explicit modulus (low-to-high, monic, degree m).
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Arc<Field>> {
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        let m = (modulus.len() - 1) as u32;
        check_params(p, m)?;
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(format!(
                "modulus coefficient out of range for p = {p}"
            )));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus is not monic".into()));
        }
        if !poly::is_irreducible(modulus, p) {
            return Err(Error::InvalidField(format!(
                "{modulus:?} is reducible over GF({p})"
            )));
        }
        Self::build(p, m, modulus.to_vec())
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Arc<Field>> {
        if spec.modulus.len() != spec.m as usize + 1 {
            return Err(Error::InvalidField(format!(
                "modulus has {} coefficients, degree {} needs {}",
                spec.modulus.len(),
                spec.m,
                spec.m + 1
            )));
        }
        Self::with_modulus(spec.p, &spec.modulus)
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>) -> Result<Arc<Field>> {
        let q = p.pow(m);
        let slow = SlowMul {
            p,
            m,
            modulus: &modulus,
        };
        let generator = (1..q)
            .find(|&g| slow.is_primitive(g, q))
            .ok_or_else(|| Error::InvalidField("no primitive element".into()))?;

        let order = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * order.max(1)];
        let mut log = vec![NONE; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = slow.mul(x, generator);
        }
        for i in order..exp.len() {
            exp[i] = exp[i - order];
        }

        let neg: Vec<u32> = (0..q).map(|a| digit_neg(a, p, m)).collect();
        let zech: Vec<u32> = (0..order)
            .map(|i| {
                let s = digit_add(1, exp[i], p, m);
                if s == 0 {
                    NONE
                } else {
                    log[s as usize]
                }
            })
            .collect();

        let add_table = (q <= ADD_TABLE_MAX).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(a, b, p, m);
                }
            }
            t
        });

        Ok(Arc::new(Field {
            spec: FieldSpec { p, m, modulus },
            q,
            exp,
            log,
            zech,
            neg,
            add_table,
            generator,
        }))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.m
    }

    /// The primitive element with the smallest index.
    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.q
    }

    pub fn check(&self, a: Elem) -> Result<Elem> {
        if a < self.q {
            Ok(a)
        } else {
            Err(Error::NotInField {
                elem: a,
                order: self.q,
            })
        }
    }

    /// The image of an integer under Z -> GF(p).
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.spec.p as i64) as u32
    }

    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let p = self.spec.p;
        let mut a = a;
        (0..self.spec.m)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Elem {
        digits
            .iter()
            .rev()
            .fold(0, |acc, &d| acc * self.spec.p + d % self.spec.p)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = &self.add_table {
            return t[(a * self.q + b) as usize];
        }
        if self.spec.p == 2 {
            return a ^ b;
        }
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let order = self.q - 1;
        let la = self.log[a as usize];
        let lb = self.log[b as usize];
        let d = if lb >= la { lb - la } else { lb + order - la };
        let z = self.zech[d as usize];
        if z == NONE {
            0
        } else {
            self.exp[(la + z) as usize]
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        Ok(self.exp[((order - self.log[a as usize]) % order.max(1)) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with the convention `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        let l = (self.log[a as usize] as u64 * (e % order)) % order;
        self.exp[l as usize]
    }

    /// `a^e` for a signed exponent; negative powers of zero are an error.
    pub fn pow_signed(&self, a: Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            return Ok(self.pow(a, e as u64));
        }
        Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
    }

    pub fn log(&self, a: Elem) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// `g^i` for the field generator `g`.
    pub fn exp(&self, i: u64) -> Elem {
        self.exp[(i % (self.q as u64 - 1).max(1)) as usize]
    }

    pub fn mult_order(&self, a: Elem) -> Option<u32> {
        let l = self.log(a)?;
        let n = self.q - 1;
        Some(n / gcd(l, n))
    }

    pub fn sum(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    pub fn product(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(1, |acc, x| self.mul(acc, x))
    }

    /// Human-readable polynomial form, e.g. `2+x` for index 5 in GF(9).
    pub fn display(&self, a: Elem) -> String {
        if self.spec.m == 1 || a == 0 {
            return a.to_string();
        }
        let terms: Vec<String> = self
            .digits(a)
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| match (i, d) {
                (0, d) => d.to_string(),
                (1, 1) => "x".into(),
                (1, d) => format!("{d}x"),
                (i, 1) => format!("x^{i}"),
                (i, d) => format!("{d}x^{i}"),
            })
            .collect();
        terms.join("+")
    }
}

fn check_params(p: u32, m: u32) -> Result<()> {
    if p < 2 || !is_prime(p) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    if m < 1 {
        return Err(Error::InvalidField(
            "extension degree must be at least 1".into(),
        ));
    }
    let order = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
    if order > MAX_ORDER {
        return Err(Error::InvalidField(format!(
            "order {p}^{m} exceeds the cap {MAX_ORDER}"
        )));
    }
    Ok(())
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Split a prime power into `(p, e)`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = q;
    let mut e = 0;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn digit_add(a: u32, b: u32, p: u32, m: u32) -> u32 {
    let (mut a, mut b, mut out, mut w) = (a, b, 0, 1);
    for _ in 0..m {
        out += ((a % p + b % p) % p) * w;
        a /= p;
        b /= p;
        w *= p;
    }
    out
}

fn digit_neg(a: u32, p: u32, m: u32) -> u32 {
    let (mut a, mut out, mut w) = (a, 0, 1);
    for _ in 0..m {
        out += ((p - a % p) % p) * w;
        a /= p;
        w *= p;
    }
    out
}

fn least_irreducible(p: u32, m: u32) -> Vec<u32> {
    let tail = p.pow(m);
    (0..tail)
        .map(|c| {
            let mut f: Vec<u32> = (0..m).map(|i| (c / p.pow(i)) % p).collect();
            f.push(1);
            f
        })
        .find(|f| poly::is_irreducible(f, p))
        .expect("an irreducible polynomial exists in every degree")
}

/// Schoolbook multiplication modulo the field polynomial; used only while the
/// tables are being built.
struct SlowMul<'a> {
    p: u32,
    m: u32,
    modulus: &'a [u32],
}

impl SlowMul<'_> {
    fn mul(&self, a: u32, b: u32) -> u32 {
        let (p, m) = (self.p, self.m as usize);
        let da = to_digits(a, p, m);
        let db = to_digits(b, p, m);
        let mut prod = vec![0u64; 2 * m];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        for deg in (m..2 * m).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for (i, &f) in self.modulus.iter().enumerate().take(m) {
                let sub = c * f as u64 % p as u64;
                let idx = deg - m + i;
                prod[idx] = (prod[idx] + p as u64 - sub) % p as u64;
            }
            prod[deg] = 0;
        }
        prod[..m]
            .iter()
            .rev()
            .fold(0u32, |acc, &d| acc * p + d as u32)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn is_primitive(&self, g: u32, q: u32) -> bool {
        let n = q - 1;
        if n == 1 {
            return g == 1;
        }
        if self.pow(g, n as u64) != 1 {
            return false;
        }
        prime_factors(n)
            .into_iter()
            .all(|r| self.pow(g, (n / r) as u64) != 1)
    }
}

fn to_digits(a: u32, p: u32, m: usize) -> Vec<u32> {
    let mut a = a;
    (0..m)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

/// Dense polynomials over GF(p), coefficients low to high.
pub(crate) mod poly {
    pub fn trim(f: &mut Vec<u32>) {
        while f.len() > 1 && *f.last().unwrap() == 0 {
            f.pop();
        }
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let (mut b, mut e) = (a as u64 % p as u64, p as u64 - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    fn is_zero(f: &[u32]) -> bool {
        f.len() == 1 && f[0] == 0
    }

    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut b = b.to_vec();
        trim(&mut b);
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p) as u64;
        let p64 = p as u64;
        while r.len() > db && !is_zero(&r) {
            let dr = r.len() - 1;
            let c = r[dr] as u64 * lead_inv % p64;
            for (i, &bi) in b.iter().enumerate() {
                let idx = dr - db + i;
                r[idx] = ((r[idx] as u64 + p64 - c * bi as u64 % p64) % p64) as u32;
            }
            if r.len() == 1 {
                break;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let mut prod = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
        rem(&prod, f, p)
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !(y.len() == 1 && y[0] == 0) {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Ben-Or test: `f` of degree m is irreducible iff
    /// gcd(f, x^(p^i) - x) = 1 for every i <= m/2.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let m = f.len() - 1;
        if m == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut h = x.clone();
        for _ in 0..m / 2 {
            let mut acc = vec![1u32];
            let mut base = h.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_mod(&acc, &base, f, p);
                }
                base = mul_mod(&base, &base, f, p);
                e >>= 1;
            }
            h = acc;
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            let g = gcd(f, &diff, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

/// The degree-2 extension GF(q^2) of GF(q), with the embedding of the base
/// field, the Frobenius conjugation `x -> x^q` and the norm `x -> x^(q+1)`.
pub struct QuadraticExtension {
    base: Arc<Field>,
    ext: Arc<Field>,
    q: u32,
    embed: Vec<Elem>,
    restrict: Vec<Elem>,
    norm_root: OnceLock<Vec<Elem>>,
}

impl std::fmt::Debug for QuadraticExtension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} over {:?}", self.ext, self.base)
    }
}

/// The norm-one subgroup of GF(q^2)*, listed as powers of its generator.
#[derive(Clone, Debug)]
pub struct UnitySubgroup {
    pub generator: Elem,
    pub elements: Vec<Elem>,
}

impl QuadraticExtension {
    /// Default fields for GF(q) and GF(q^2).
    pub fn for_q(q: u32) -> Result<Arc<Self>> {
        let (p, e) = prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Self::new(Field::new(p, e)?, Field::new(p, 2 * e)?)
    }

    /// View `ext` as a quadratic extension of the default field of order sqrt(|ext|).
    pub fn over_default_base(ext: Arc<Field>) -> Result<Arc<Self>> {
        if !ext.degree().is_multiple_of(2) {
            return Err(Error::NotExtension(ext.order()));
        }
        let base = Field::new(ext.characteristic(), ext.degree() / 2)?;
        Self::new(base, ext)
    }

    pub fn new(base: Arc<Field>, ext: Arc<Field>) -> Result<Arc<Self>> {
        if base.characteristic() != ext.characteristic() || ext.degree() != 2 * base.degree() {
            return Err(Error::NotExtension(ext.order()));
        }
        let q = base.order();
        // Send the base generator of GF(p)[x]/(f) to the smallest root of f in ext.
        let f = &base.spec().modulus;
        let root = (0..ext.order())
            .find(|&r| {
                let v = f
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| ext.add(ext.mul(acc, r), c));
                v == 0
            })
            .ok_or(Error::NotExtension(ext.order()))?;
        let embed: Vec<Elem> = (0..q)
            .map(|c| {
                base.digits(c)
                    .iter()
                    .rev()
                    .fold(0, |acc, &d| ext.add(ext.mul(acc, root), d))
            })
            .collect();
        let mut restrict = vec![NONE; ext.order() as usize];
        for (c, &e) in embed.iter().enumerate() {
            if restrict[e as usize] != NONE {
                return Err(Error::NotExtension(ext.order()));
            }
            restrict[e as usize] = c as u32;
        }
        Ok(Arc::new(Self {
            base,
            ext,
            q,
            embed,
            restrict,
            norm_root: OnceLock::new(),
        }))
    }

    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    pub fn ext(&self) -> &Arc<Field> {
        &self.ext
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn embed(&self, c: Elem) -> Elem {
        self.embed[c as usize]
    }

    pub fn restrict(&self, x: Elem) -> Option<Elem> {
        let r = self.restrict[x as usize];
        (r != NONE).then_some(r)
    }

    pub fn in_base(&self, x: Elem) -> bool {
        self.restrict[x as usize] != NONE
    }

    #[inline]
    pub fn conj(&self, x: Elem) -> Elem {
        self.ext.pow(x, self.q as u64)
    }

    /// `x^(q+1)`, as an element of the extension lying in the base subfield.
    #[inline]
    pub fn norm(&self, x: Elem) -> Elem {
        self.ext.pow(x, self.q as u64 + 1)
    }

    pub fn norm_in_base(&self, x: Elem) -> Elem {
        self.restrict[self.norm(x) as usize]
    }

    /// Base-field elements as extension indices, in base index order.
    pub fn subfield(&self) -> &[Elem] {
        &self.embed
    }

    pub fn subfield_units(&self) -> &[Elem] {
        &self.embed[1..]
    }

    /// Smallest-index `x` with `N(x) = c`; `c` is an extension index.
    pub fn solve_norm(&self, c: Elem) -> Result<Elem> {
        if c == 0 {
            return Err(Error::DivisionByZero);
        }
        if !self.in_base(c) {
            return Err(Error::InvalidSpec(format!("{c} is not in the base field")));
        }
        let table = self.norm_root.get_or_init(|| {
            let mut t = vec![NONE; self.ext.order() as usize];
            for x in 1..self.ext.order() {
                let n = self.norm(x) as usize;
                if t[n] == NONE {
                    t[n] = x;
                }
            }
            t
        });
        Ok(table[c as usize])
    }

    /// The subgroup of order q+1, generated by its smallest-index generator.
    pub fn unity_subgroup(&self) -> UnitySubgroup {
        let target = self.q + 1;
        let generator = (1..self.ext.order())
            .find(|&x| self.ext.mult_order(x) == Some(target))
            .expect("GF(q^2)* is cyclic of order divisible by q+1");
        let mut elements = Vec::with_capacity(target as usize);
        let mut x = 1;
        for _ in 0..target {
            elements.push(x);
            x = self.ext.mul(x, generator);
        }
        UnitySubgroup {
            generator,
            elements,
        }
    }

    /// One representative per coset of GF(q)* in GF(q^2)*, smallest index
    /// first; the first representative is 1.
    pub fn coset_representatives(&self) -> Vec<Elem> {
        let mut covered = vec![false; self.ext.order() as usize];
        let mut reps = Vec::with_capacity(self.q as usize + 1);
        for x in 1..self.ext.order() {
            if covered[x as usize] {
                continue;
            }
            reps.push(x);
            for &s in self.subfield_units() {
                covered[self.ext.mul(x, s) as usize] = true;
            }
        }
        reps
    }
}
