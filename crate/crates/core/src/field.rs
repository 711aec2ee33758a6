//! Exact arithmetic in GF(p^e).
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{e-1} p^{e-1}` where
//! `c_i` are the coordinates in the power basis of the modulus.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order supported by the table-driven arithmetic.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// Largest extension degree accepted by [`make_field`].
pub const MAX_DEGREE: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub e: u32,
    /// Monic modulus, constant term first, length `e + 1`.
    pub modulus: Vec<u32>,
}

impl FieldParams {
    pub fn order(&self) -> u32 {
        self.p.pow(self.e)
    }
}

/// An element of GF(p^e), stored in its integer encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(pub u32);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn from_coeffs(field: &Field, coeffs: &[u32]) -> Result<Scalar> {
        let p = field.p();
        if coeffs.len() > field.e() as usize || coeffs.iter().any(|&c| c >= p) {
            return Err(Error::InvalidInput(format!(
                "scalar coordinates {coeffs:?} do not describe an element of GF({}^{})",
                p,
                field.e()
            )));
        }
        let mut v = 0u32;
        for &c in coeffs.iter().rev() {
            v = v * p + c;
        }
        Ok(Scalar(v))
    }

    /// Power-basis coordinates, always of length `e`.
    pub fn coeffs(self, field: &Field) -> Vec<u32> {
        let p = field.p();
        let mut v = self.0;
        (0..field.e())
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }
}

#[derive(Clone)]
enum Arith {
    /// e = 1: plain modular arithmetic.
    Prime,
    /// q <= 256: full addition and multiplication tables.
    Table { add: Vec<u16>, mul: Vec<u16> },
    /// Larger extensions: discrete logs with a Zech table for addition.
    Log { zech: Vec<u32> },
}

/// Arithmetic context for GF(p^e). Cheap to clone through [`FieldRef`].
#[derive(Clone)]
pub struct Field {
    params: FieldParams,
    q: u32,
    arith: Arith,
    exp: Vec<u32>,
    log: Vec<u32>,
    inv: Vec<u32>,
    neg: Vec<u32>,
    generator: u32,
}

pub type FieldRef = Arc<Field>;

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.params.p, self.params.e)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
    }
}
impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Polynomials over GF(p), constant term first, no trailing zeros.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = (r[idx] + p - c * b[i] % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    mod_pow(a, p - 2, p)
}

fn mod_pow(mut a: u32, mut k: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = (a % p) as u64;
    while k > 0 {
        if k & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        k >>= 1;
    }
    a = r as u32;
    a
}

/// Exhaustive irreducibility test: no monic factor of degree 1..=e/2.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let e = f.len() - 1;
    if e <= 1 {
        return e == 1;
    }
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Least irreducible monic polynomial of degree `e` over GF(p), comparing
/// coefficient sequences lexicographically from the constant term upward.
fn least_irreducible(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(e);
    for code in 0..count {
        // the constant term is the most significant digit
        let mut coeffs = vec![0u32; e as usize];
        let mut c = code;
        for i in (0..e as usize).rev() {
            coeffs[i] = (c % p as u64) as u32;
            c /= p as u64;
        }
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

/// Builds GF(p^e) with the lexicographically least irreducible modulus.
pub fn make_field(p: u32, e: u32) -> Result<FieldRef> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if e == 0 || e > MAX_DEGREE {
        return Err(Error::DegreeOutOfRange(e as usize));
    }
    if (p as u64).pow(e) > MAX_FIELD_ORDER {
        return Err(Error::FieldTooLarge { p, e });
    }
    let modulus = least_irreducible(p, e);
    Ok(Arc::new(Field::build(FieldParams { p, e, modulus })))
}

/// Builds a field from explicit parameters (used when reading JSON).
pub fn field_from_params(params: &FieldParams) -> Result<FieldRef> {
    let FieldParams { p, e, modulus } = params;
    if !is_prime(*p) {
        return Err(Error::NonPrime(*p));
    }
    if *e == 0 || *e > MAX_DEGREE {
        return Err(Error::DegreeOutOfRange(*e as usize));
    }
    if (*p as u64).pow(*e) > MAX_FIELD_ORDER {
        return Err(Error::FieldTooLarge { p: *p, e: *e });
    }
    if modulus.len() != *e as usize + 1
        || modulus[*e as usize] != 1
        || modulus.iter().any(|&c| c >= *p)
        || !is_irreducible(modulus, *p)
    {
        return Err(Error::InvalidInput(format!(
            "modulus {modulus:?} is not a monic irreducible of degree {e} over GF({p})"
        )));
    }
    Ok(Arc::new(Field::build(params.clone())))
}

/// Least e >= 1 with p^e = 1 (mod m).
pub fn minimal_extension_degree(p: u32, m: u32) -> u32 {
    if m <= 1 {
        return 1;
    }
    let mut e = 1u32;
    let mut v = (p % m) as u64;
    while v != 1 {
        v = v * p as u64 % m as u64;
        e += 1;
        if e > m {
            // p and m share a factor; the order does not exist
            return 0;
        }
    }
    e
}

impl Field {
    fn build(params: FieldParams) -> Field {
        let p = params.p;
        let e = params.e;
        let q = p.pow(e);
        let mut field = Field {
            params,
            q,
            arith: Arith::Prime,
            exp: Vec::new(),
            log: Vec::new(),
            inv: Vec::new(),
            neg: Vec::new(),
            generator: 1,
        };
        // negation is digitwise
        field.neg = (0..q)
            .map(|a| {
                let mut v = a;
                let mut out = 0u32;
                let mut place = 1u32;
                for _ in 0..e {
                    let c = v % p;
                    v /= p;
                    out += ((p - c) % p) * place;
                    place *= p;
                }
                out
            })
            .collect();
        if e > 1 {
            let mul = |a: u32, b: u32| field.poly_mul(a, b);
            // find the least generator of the multiplicative group
            let order = q - 1;
            let prime_factors = prime_factors(order);
            let mut gen = 0;
            for g in 2..q {
                if prime_factors.iter().all(|&r| field_pow_slow(g, order / r, &mul) != 1) {
                    gen = g;
                    break;
                }
            }
            if q == 2 {
                gen = 1;
            }
            let mut exp = vec![0u32; 2 * order as usize];
            let mut log = vec![0u32; q as usize];
            let mut x = 1u32;
            for k in 0..order {
                exp[k as usize] = x;
                exp[(k + order) as usize] = x;
                log[x as usize] = k;
                x = mul(x, gen);
            }
            field.exp = exp;
            field.log = log;
            field.generator = gen;
            let add_digits = |a: u32, b: u32| -> u32 {
                let (mut a, mut b) = (a, b);
                let mut out = 0u32;
                let mut place = 1u32;
                for _ in 0..e {
                    out += ((a % p + b % p) % p) * place;
                    a /= p;
                    b /= p;
                    place *= p;
                }
                out
            };
            if q <= 256 {
                let mut add = vec![0u16; (q * q) as usize];
                let mut mtab = vec![0u16; (q * q) as usize];
                for a in 0..q {
                    for b in 0..q {
                        add[(a * q + b) as usize] = add_digits(a, b) as u16;
                        mtab[(a * q + b) as usize] = field.log_mul(a, b) as u16;
                    }
                }
                field.arith = Arith::Table { add, mul: mtab };
            } else {
                // zech[k] = log(1 + g^k), or u32::MAX when 1 + g^k = 0
                let zech = (0..order)
                    .map(|k| {
                        let s = add_digits(1, field.exp[k as usize]);
                        if s == 0 {
                            u32::MAX
                        } else {
                            field.log[s as usize]
                        }
                    })
                    .collect();
                field.arith = Arith::Log { zech };
            }
            field.inv = (0..q)
                .map(|a| if a == 0 { 0 } else { field.exp[((order - field.log[a as usize]) % order) as usize] })
                .collect();
        } else {
            field.inv = (0..q).map(|a| if a == 0 { 0 } else { mod_inv(a, p) }).collect();
            let order = q - 1;
            let pf = prime_factors(order);
            let mut gen = 1;
            for g in 1..q {
                if pf.iter().all(|&r| mod_pow(g, order / r, p) != 1) {
                    gen = g;
                    break;
                }
            }
            field.generator = gen;
        }
        field
    }

    /// Multiplication through polynomial reduction; only used while building tables.
    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.params.p;
        let e = self.params.e as usize;
        let da = digits(a, p, e);
        let db = digits(b, p, e);
        let mut prod = vec![0u32; 2 * e];
        for i in 0..e {
            for j in 0..e {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let r = poly_rem(&prod, &self.params.modulus, p);
        let mut v = 0u32;
        for &c in r.iter().rev() {
            v = v * p + c;
        }
        v
    }

    fn log_mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }
    pub fn p(&self) -> u32 {
        self.params.p
    }
    pub fn e(&self) -> u32 {
        self.params.e
    }
    pub fn order(&self) -> u32 {
        self.q
    }
    /// A fixed generator of the multiplicative group.
    pub fn generator(&self) -> Scalar {
        Scalar(self.generator)
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        (0..self.q).map(Scalar)
    }

    /// The image of an integer under Z -> GF(p).
    pub fn from_int(&self, v: i64) -> Scalar {
        Scalar(v.rem_euclid(self.params.p as i64) as u32)
    }

    #[inline(always)]
    pub fn add_raw(&self, a: u32, b: u32) -> u32 {
        match &self.arith {
            Arith::Prime => {
                let s = a + b;
                if s >= self.q {
                    s - self.q
                } else {
                    s
                }
            }
            Arith::Table { add, .. } => add[(a * self.q + b) as usize] as u32,
            Arith::Log { zech } => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let order = self.q - 1;
                let la = self.log[a as usize];
                let lb = self.log[b as usize];
                let k = if lb >= la { lb - la } else { lb + order - la };
                let z = zech[k as usize];
                if z == u32::MAX {
                    0
                } else {
                    self.exp[(la + z) as usize]
                }
            }
        }
    }

    #[inline(always)]
    pub fn mul_raw(&self, a: u32, b: u32) -> u32 {
        match &self.arith {
            Arith::Prime => ((a as u64 * b as u64) % self.q as u64) as u32,
            Arith::Table { mul, .. } => mul[(a * self.q + b) as usize] as u32,
            Arith::Log { .. } => self.log_mul(a, b),
        }
    }

    #[inline(always)]
    pub fn neg_raw(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline(always)]
    pub fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg[b as usize])
    }

    #[inline(always)]
    pub fn inv_raw(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.add_raw(a.0, b.0))
    }
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.sub_raw(a.0, b.0))
    }
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.mul_raw(a.0, b.0))
    }
    pub fn neg(&self, a: Scalar) -> Scalar {
        Scalar(self.neg_raw(a.0))
    }
    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Scalar) -> Option<Scalar> {
        if a.is_zero() {
            None
        } else {
            Some(Scalar(self.inv_raw(a.0)))
        }
    }

    pub fn pow(&self, a: Scalar, k: u64) -> Scalar {
        let mut r = 1u32;
        let mut b = a.0;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul_raw(r, b);
            }
            b = self.mul_raw(b, b);
            k >>= 1;
        }
        Scalar(r)
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Scalar) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let n = self.q - 1;
        let mut ord = n;
        for r in prime_factors(n) {
            while ord.is_multiple_of(r) && self.pow(a, (ord / r) as u64) == Scalar::ONE {
                ord /= r;
            }
        }
        Some(ord)
    }

    /// `y += a * x` elementwise.
    #[inline]
    pub fn axpy(&self, y: &mut [u32], a: u32, x: &[u32]) {
        if a == 0 {
            return;
        }
        debug_assert_eq!(y.len(), x.len());
        match &self.arith {
            Arith::Prime => {
                let q = self.q;
                if q == 2 {
                    for (yi, &xi) in y.iter_mut().zip(x) {
                        *yi ^= xi;
                    }
                } else {
                    let a = a as u64;
                    let q64 = q as u64;
                    for (yi, &xi) in y.iter_mut().zip(x) {
                        if xi != 0 {
                            *yi = ((*yi as u64 + a * xi as u64) % q64) as u32;
                        }
                    }
                }
            }
            Arith::Table { add, mul } => {
                let q = self.q as usize;
                let row = &mul[a as usize * q..(a as usize + 1) * q];
                if self.params.p == 2 {
                    for (yi, &xi) in y.iter_mut().zip(x) {
                        *yi ^= row[xi as usize] as u32;
                    }
                } else {
                    for (yi, &xi) in y.iter_mut().zip(x) {
                        if xi != 0 {
                            *yi = add[*yi as usize * q + row[xi as usize] as usize] as u32;
                        }
                    }
                }
            }
            Arith::Log { .. } => {
                for (yi, &xi) in y.iter_mut().zip(x) {
                    if xi != 0 {
                        *yi = self.add_raw(*yi, self.log_mul(a, xi));
                    }
                }
            }
        }
    }

    /// `y *= a` elementwise.
    pub fn scale(&self, y: &mut [u32], a: u32) {
        if a == 1 {
            return;
        }
        for yi in y.iter_mut() {
            *yi = self.mul_raw(*yi, a);
        }
    }

    /// `sum_i a_i b_i`.
    pub fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        let mut s = 0u32;
        for (&x, &y) in a.iter().zip(b) {
            if x != 0 && y != 0 {
                s = self.add_raw(s, self.mul_raw(x, y));
            }
        }
        s
    }

    /// Primitive m-th root of unity: the least element of order exactly m.
    pub fn primitive_root(&self, m: u32) -> Result<Scalar> {
        if m == 0 || !(self.q - 1).is_multiple_of(m) {
            return Err(Error::OrderUnavailable { m, q: self.q });
        }
        for a in 1..self.q {
            if self.element_order(Scalar(a)) == Some(m) {
                return Ok(Scalar(a));
            }
        }
        Err(Error::OrderUnavailable { m, q: self.q })
    }

    pub fn format(&self, a: Scalar) -> String {
        if self.params.e == 1 {
            return a.0.to_string();
        }
        let c = a.coeffs(self);
        let mut parts = Vec::new();
        for (i, &ci) in c.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "w".to_string(),
                _ => format!("w^{i}"),
            };
            parts.push(match (ci, i) {
                (_, 0) => ci.to_string(),
                (1, _) => mono,
                _ => format!("{ci}{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// Convenience wrapper for [`Field::primitive_root`].
pub fn primitive_root(field: &Field, m: u32) -> Result<Scalar> {
    field.primitive_root(m)
}

fn digits(mut v: u32, p: u32, e: usize) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let c = v % p;
            v /= p;
            c
        })
        .collect()
}

fn field_pow_slow(a: u32, mut k: u32, mul: &impl Fn(u32, u32) -> u32) -> u32 {
    let mut r = 1u32;
    let mut b = a;
    while k > 0 {
        if k & 1 == 1 {
            r = mul(r, b);
        }
        b = mul(b, b);
        k >>= 1;
    }
    r
}

pub fn prime_factors(mut n: u32) -> Vec<u32> {
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

/// Least common multiple of the extension degrees needed for every m in `ms`.
pub fn compositum_degree(p: u32, ms: &[u32]) -> u32 {
    ms.iter().map(|&m| minimal_extension_degree(p, m)).fold(1u32, |acc, e| acc.lcm(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_moduli() {
        assert_eq!(make_field(2, 1).unwrap().params().modulus, vec![0, 1]);
        assert_eq!(make_field(2, 2).unwrap().params().modulus, vec![1, 1, 1]);
        assert_eq!(make_field(3, 1).unwrap().params().modulus, vec![0, 1]);
        assert_eq!(make_field(3, 2).unwrap().params().modulus, vec![1, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(make_field(4, 1), Err(Error::NonPrime(4))));
        assert!(matches!(make_field(2, 0), Err(Error::DegreeOutOfRange(0))));
        assert!(matches!(make_field(2, 9), Err(Error::DegreeOutOfRange(9))));
    }

    #[test]
    fn roots_of_unity() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.primitive_root(1).unwrap(), Scalar::ONE);
        // the class of x is encoded as 2
        assert_eq!(f.primitive_root(3).unwrap(), Scalar(2));
        let g = make_field(3, 1).unwrap();
        assert_eq!(g.primitive_root(2).unwrap(), Scalar(2));
        assert!(matches!(g.primitive_root(4), Err(Error::OrderUnavailable { .. })));
    }

    #[test]
    fn extension_degrees() {
        assert_eq!(minimal_extension_degree(2, 3), 2);
        assert_eq!(minimal_extension_degree(2, 1), 1);
        assert_eq!(minimal_extension_degree(3, 5), 4);
        assert_eq!(compositum_degree(2, &[3, 5]), 4);
        assert_eq!(compositum_degree(3, &[2, 4, 5]), 4);
    }

    #[test]
    fn coefficient_round_trip() {
        let f = make_field(3, 3).unwrap();
        for a in f.elements() {
            let c = a.coeffs(&f);
            assert_eq!(Scalar::from_coeffs(&f, &c).unwrap(), a);
        }
    }

    fn check_axioms(f: &Field) {
        let els: Vec<Scalar> = f.elements().collect();
        let p = f.p() as u64;
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), Scalar::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Scalar::ONE);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                // Frobenius
                assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn axioms_exhaustive_small_fields() {
        for (p, e) in [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2)] {
            let f = make_field(p, e).unwrap();
            assert!(f.order() <= 64);
            check_axioms(&f);
        }
    }

    #[test]
    fn log_arithmetic_matches_polynomial_arithmetic() {
        // GF(3^6) uses Zech logarithms
        let f = make_field(3, 6).unwrap();
        let samples = [0u32, 1, 2, 5, 17, 100, 333, 728];
        for &a in &samples {
            for &b in &samples {
                assert_eq!(f.mul_raw(a, b), f.poly_mul(a, b));
                let mut da = digits(a, 3, 6);
                let db = digits(b, 3, 6);
                for i in 0..6 {
                    da[i] = (da[i] + db[i]) % 3;
                }
                let s = da.iter().rev().fold(0u32, |v, &c| v * 3 + c);
                assert_eq!(f.add_raw(a, b), s);
            }
        }
    }

    #[test]
    fn roots_have_exact_order() {
        for (p, e) in [(2, 4), (3, 4), (5, 2), (2, 6)] {
            let f = make_field(p, e).unwrap();
            let q1 = f.order() - 1;
            for m in 1..=q1 {
                if q1.is_multiple_of(m) {
                    let z = f.primitive_root(m).unwrap();
                    assert_eq!(f.pow(z, m as u64), Scalar::ONE);
                    for k in 1..m {
                        assert_ne!(f.pow(z, k as u64), Scalar::ONE);
                    }
                }
            }
        }
    }
}
