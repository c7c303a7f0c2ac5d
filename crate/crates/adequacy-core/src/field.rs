//! Exact arithmetic in small finite fields GF(p^s).
//!
//! Fields are interned globally: constructing GF(p^s) twice yields handles to
//! the same spec, so scalars can carry a compact field id and be checked for
//! mixups cheaply. Extension fields are represented as F_p[x] modulo a
//! canonical irreducible polynomial: the lexicographically least monic
//! irreducible of degree s, comparing coefficient tuples low-degree-first.
//! A scalar is packed into a single u32 as sum(c_i * p^i), which keeps
//! elements Copy and makes canonical byte encodings trivial.
//!
//! Everything here is exact integer arithmetic; there is no floating point
//! anywhere in this crate.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Largest supported extension degree.
pub const MAX_EXTENSION_DEGREE: u32 = 16;
/// Largest supported field size p^s.
pub const MAX_FIELD_SIZE: u64 = 1 << 31;

// ---------------------------------------------------------------------------
// small integer helpers (shared by group-order factoring etc.)
// ---------------------------------------------------------------------------

/// Deterministic primality by trial division; inputs here are < 2^31.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, smallest prime first.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// a^e mod m without overflow (m < 2^32).
pub fn pow_mod(a: u64, mut e: u64, m: u64) -> u64 {
    let mut base = a % m;
    let mut acc = 1u64 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Multiplicative order of p modulo e (e >= 1, gcd(p, e) = 1).
pub fn splitting_degree(p: u64, e: u64) -> Result<u32> {
    if e == 0 {
        return Err(Error::InvalidInput("order modulus must be positive".into()));
    }
    if e == 1 {
        return Ok(1);
    }
    if gcd_u64(p % e, e) != 1 {
        return Err(Error::InvalidInput(format!(
            "{p} and {e} are not coprime; no multiplicative order"
        )));
    }
    let mut acc = p % e;
    let mut k = 1u32;
    while acc != 1 {
        acc = acc * (p % e) % e;
        k += 1;
        if u64::from(k) > e {
            return Err(Error::InvalidInput(format!(
                "order of {p} mod {e} not found (internal)"
            )));
        }
    }
    Ok(k)
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

// ---------------------------------------------------------------------------
// field registry
// ---------------------------------------------------------------------------

/// Immutable data describing one finite field.
pub struct FieldSpec {
    id: u32,
    p: u64,
    s: u32,
    q: u64,
    /// Monic modulus, coefficients low-degree-first, length s+1, values < p.
    /// For prime fields this is the polynomial x, i.e. [0, 1].
    modulus: Vec<u64>,
}

struct Registry {
    by_ps: HashMap<(u64, u32), u32>,
    specs: Vec<Arc<FieldSpec>>,
}

static REGISTRY: OnceLock<Mutex<Registry>> = OnceLock::new();

fn registry() -> &'static Mutex<Registry> {
    REGISTRY.get_or_init(|| {
        Mutex::new(Registry {
            by_ps: HashMap::new(),
            specs: Vec::new(),
        })
    })
}

/// Handle to an interned finite field. Cloning is cheap (Arc).
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.s)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.s == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.s)
        }
    }
}

/// One element of a finite field, packed as sum(c_i p^i) together with the
/// id of its field so mixups across fields are detectable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    field: u32,
    value: u32,
}

impl Scalar {
    /// Packed integer value sum(c_i p^i); doubles as the canonical order key.
    pub fn value(self) -> u32 {
        self.value
    }
    pub fn field_id(self) -> u32 {
        self.field
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}#{}", self.field, self.value)
    }
}

impl Field {
    /// Construct (or fetch the interned copy of) GF(p^s).
    pub fn new(p: u64, s: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 || s > MAX_EXTENSION_DEGREE {
            return Err(Error::FieldTooLarge {
                p,
                s,
                max_s: MAX_EXTENSION_DEGREE,
                max_q: MAX_FIELD_SIZE,
            });
        }
        let mut q: u64 = 1;
        for _ in 0..s {
            q = q.saturating_mul(p);
            if q > MAX_FIELD_SIZE {
                return Err(Error::FieldTooLarge {
                    p,
                    s,
                    max_s: MAX_EXTENSION_DEGREE,
                    max_q: MAX_FIELD_SIZE,
                });
            }
        }
        {
            let reg = registry().lock().unwrap();
            if let Some(&id) = reg.by_ps.get(&(p, s)) {
                return Ok(Field(Arc::clone(&reg.specs[id as usize])));
            }
        }
        // Compute outside the lock; the result is deterministic, so a race
        // that computes it twice is harmless (first insert wins).
        let modulus = canonical_modulus(p, s);
        let mut reg = registry().lock().unwrap();
        if let Some(&id) = reg.by_ps.get(&(p, s)) {
            return Ok(Field(Arc::clone(&reg.specs[id as usize])));
        }
        let id = reg.specs.len() as u32;
        let spec = Arc::new(FieldSpec {
            id,
            p,
            s,
            q,
            modulus,
        });
        reg.by_ps.insert((p, s), id);
        reg.specs.push(Arc::clone(&spec));
        Ok(Field(spec))
    }

    /// Crate-internal access to packed-value arithmetic (hot paths).
    pub(crate) fn spec(&self) -> &FieldSpec {
        &self.0
    }

    /// Crate-internal scalar constructor from an already-valid packed value.
    pub(crate) fn scalar_unchecked(&self, value: u32) -> Scalar {
        debug_assert!((value as u64) < self.0.q);
        Scalar {
            field: self.0.id,
            value,
        }
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn s(&self) -> u32 {
        self.0.s
    }
    /// Field size q = p^s.
    pub fn q(&self) -> u64 {
        self.0.q
    }
    pub fn id(&self) -> u32 {
        self.0.id
    }
    /// Modulus coefficients, low-degree-first, monic of degree s.
    pub fn modulus_coeffs(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> Scalar {
        Scalar {
            field: self.0.id,
            value: 0,
        }
    }
    pub fn one(&self) -> Scalar {
        Scalar {
            field: self.0.id,
            value: 1,
        }
    }

    /// Embed an integer via the prime subfield (n mod p).
    pub fn scalar_from_u64(&self, n: u64) -> Scalar {
        Scalar {
            field: self.0.id,
            value: (n % self.0.p) as u32,
        }
    }

    /// Embed a signed integer via the prime subfield.
    pub fn scalar_from_i64(&self, n: i64) -> Scalar {
        let p = self.0.p as i64;
        let r = ((n % p) + p) % p;
        self.scalar_from_u64(r as u64)
    }

    /// Build a scalar from coefficients c_0..c_{s-1} (low degree first).
    pub fn scalar_from_coeffs(&self, coeffs: &[u64]) -> Result<Scalar> {
        if coeffs.len() > self.0.s as usize {
            return Err(Error::InvalidInput(format!(
                "{} coefficients for extension degree {}",
                coeffs.len(),
                self.0.s
            )));
        }
        let mut value: u64 = 0;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.0.p {
                return Err(Error::InvalidInput(format!(
                    "coefficient {c} out of range for p = {}",
                    self.0.p
                )));
            }
            value += c * self.0.p.pow(i as u32);
        }
        Ok(Scalar {
            field: self.0.id,
            value: value as u32,
        })
    }

    /// Scalar from a packed value (must be < q).
    pub fn scalar_from_packed(&self, value: u64) -> Result<Scalar> {
        if value >= self.0.q {
            return Err(Error::InvalidInput(format!(
                "packed value {value} out of range for field of size {}",
                self.0.q
            )));
        }
        Ok(Scalar {
            field: self.0.id,
            value: value as u32,
        })
    }

    /// Coefficients of a scalar, low degree first, length s.
    pub fn coeffs_of(&self, a: Scalar) -> Result<Vec<u64>> {
        self.check(a)?;
        let mut v = a.value as u64;
        let mut out = Vec::with_capacity(self.0.s as usize);
        for _ in 0..self.0.s {
            out.push(v % self.0.p);
            v /= self.0.p;
        }
        Ok(out)
    }

    fn check(&self, a: Scalar) -> Result<()> {
        if a.field != self.0.id {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn contains(&self, a: Scalar) -> bool {
        a.field == self.0.id
    }

    pub fn add(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        self.check(a)?;
        self.check(b)?;
        Ok(Scalar {
            field: self.0.id,
            value: self.0.val_add(a.value, b.value),
        })
    }

    pub fn sub(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        self.check(a)?;
        self.check(b)?;
        Ok(Scalar {
            field: self.0.id,
            value: self.0.val_sub(a.value, b.value),
        })
    }

    pub fn neg(&self, a: Scalar) -> Result<Scalar> {
        self.check(a)?;
        Ok(Scalar {
            field: self.0.id,
            value: self.0.val_neg(a.value),
        })
    }

    pub fn mul(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        self.check(a)?;
        self.check(b)?;
        Ok(Scalar {
            field: self.0.id,
            value: self.0.val_mul(a.value, b.value),
        })
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar> {
        self.check(a)?;
        match self.0.val_inv(a.value) {
            Some(v) => Ok(Scalar {
                field: self.0.id,
                value: v,
            }),
            None => Err(Error::ZeroInverse),
        }
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        let ib = self.inv(b)?;
        self.mul(a, ib)
    }

    pub fn pow(&self, a: Scalar, e: u64) -> Result<Scalar> {
        self.check(a)?;
        Ok(Scalar {
            field: self.0.id,
            value: self.0.val_pow(a.value, e),
        })
    }

    /// All field elements in canonical (packed value) order.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        let id = self.0.id;
        (0..self.0.q).map(move |v| Scalar {
            field: id,
            value: v as u32,
        })
    }

    /// Deterministically chosen element of multiplicative order e:
    /// the first x (in canonical element order) whose (q-1)/e power has
    /// exact order e.
    pub fn element_of_order(&self, e: u64) -> Result<Scalar> {
        let m = self.0.q - 1;
        if e == 0 || m % e != 0 {
            return Err(Error::NoSuchRoot(e, m));
        }
        if e == 1 {
            return Ok(self.one());
        }
        let fac = factor(e);
        for v in 2..self.0.q {
            let y = self.0.val_pow(v as u32, m / e);
            if y == 0 || y == 1 {
                continue;
            }
            let mut ok = true;
            for &(l, _) in &fac {
                if self.0.val_pow(y, e / l) == 1 {
                    ok = false;
                    break;
                }
            }
            if ok {
                debug_assert_eq!(self.0.val_pow(y, e), 1);
                return Ok(Scalar {
                    field: self.0.id,
                    value: y,
                });
            }
        }
        Err(Error::NoSuchRoot(e, m))
    }

    /// Render a scalar: plain residue for prime fields, coefficient tuple
    /// (low degree first) for extensions.
    pub fn render(&self, a: Scalar) -> String {
        if self.0.s == 1 || a.field != self.0.id {
            format!("{}", a.value)
        } else {
            let cs = self.coeffs_of(a).unwrap();
            let body: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
            format!("[{}]", body.join(","))
        }
    }
}

// ---------------------------------------------------------------------------
// packed-value arithmetic (hot path; no field-id checks)
// ---------------------------------------------------------------------------

const MAX_DEG: usize = MAX_EXTENSION_DEGREE as usize;

impl FieldSpec {
    #[inline]
    fn unpack(&self, v: u32, out: &mut [u64; MAX_DEG]) {
        let mut v = v as u64;
        for slot in out.iter_mut().take(self.s as usize) {
            *slot = v % self.p;
            v /= self.p;
        }
    }

    #[inline]
    fn pack(&self, coeffs: &[u64; MAX_DEG]) -> u32 {
        let mut acc: u64 = 0;
        for i in (0..self.s as usize).rev() {
            acc = acc * self.p + coeffs[i];
        }
        acc as u32
    }

    #[inline]
    pub(crate) fn val_add(&self, a: u32, b: u32) -> u32 {
        if self.s == 1 {
            return ((a as u64 + b as u64) % self.p) as u32;
        }
        let mut ca = [0u64; MAX_DEG];
        let mut cb = [0u64; MAX_DEG];
        self.unpack(a, &mut ca);
        self.unpack(b, &mut cb);
        for i in 0..self.s as usize {
            ca[i] = (ca[i] + cb[i]) % self.p;
        }
        self.pack(&ca)
    }

    #[inline]
    pub(crate) fn val_neg(&self, a: u32) -> u32 {
        if self.s == 1 {
            return if a == 0 { 0 } else { (self.p - a as u64) as u32 };
        }
        let mut ca = [0u64; MAX_DEG];
        self.unpack(a, &mut ca);
        for c in ca.iter_mut().take(self.s as usize) {
            if *c != 0 {
                *c = self.p - *c;
            }
        }
        self.pack(&ca)
    }

    #[inline]
    pub(crate) fn val_sub(&self, a: u32, b: u32) -> u32 {
        self.val_add(a, self.val_neg(b))
    }

    pub(crate) fn val_mul(&self, a: u32, b: u32) -> u32 {
        if self.s == 1 {
            return (a as u64 * b as u64 % self.p) as u32;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.s as usize;
        let mut ca = [0u64; MAX_DEG];
        let mut cb = [0u64; MAX_DEG];
        self.unpack(a, &mut ca);
        self.unpack(b, &mut cb);
        let mut work = [0u64; 2 * MAX_DEG];
        for i in 0..s {
            if ca[i] == 0 {
                continue;
            }
            for j in 0..s {
                if cb[j] != 0 {
                    work[i + j] = (work[i + j] + ca[i] * cb[j]) % self.p;
                }
            }
        }
        // reduce modulo the monic modulus
        for d in (s..2 * s - 1).rev() {
            let c = work[d];
            if c == 0 {
                continue;
            }
            work[d] = 0;
            for i in 0..s {
                let m = self.modulus[i];
                if m != 0 {
                    let sub = c * m % self.p;
                    work[d - s + i] = (work[d - s + i] + self.p - sub) % self.p;
                }
            }
        }
        let mut low = [0u64; MAX_DEG];
        low[..s].copy_from_slice(&work[..s]);
        self.pack(&low)
    }

    pub(crate) fn val_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        while e > 0 {
            if e & 1 == 1 {
                acc = self.val_mul(acc, base);
            }
            base = self.val_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn val_inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if self.s == 1 {
            // extended euclid on integers
            let (mut t, mut new_t): (i64, i64) = (0, 1);
            let (mut r, mut new_r): (i64, i64) = (self.p as i64, a as i64);
            while new_r != 0 {
                let qt = r / new_r;
                (t, new_t) = (new_t, t - qt * new_t);
                (r, new_r) = (new_r, r - qt * new_r);
            }
            debug_assert_eq!(r, 1);
            let p = self.p as i64;
            return Some((((t % p) + p) % p) as u32);
        }
        // Polynomial extended euclid over F_p: invert a modulo the modulus.
        let s = self.s as usize;
        let mut ca = [0u64; MAX_DEG];
        self.unpack(a, &mut ca);
        let a_poly: Vec<u64> = ca[..s].to_vec();
        let inv = fp_poly_inverse_mod(&a_poly, &self.modulus, self.p)?;
        let mut out = [0u64; MAX_DEG];
        for (i, &c) in inv.iter().enumerate().take(s) {
            out[i] = c;
        }
        Some(self.pack(&out))
    }
}

// ---------------------------------------------------------------------------
// dense polynomials over F_p (used for modulus selection and scalar inverse)
// ---------------------------------------------------------------------------

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1; // m monic
    debug_assert_eq!(m[dm], 1);
    while r.len() > dm {
        let d = r.len() - 1;
        let c = r[d];
        if c != 0 {
            for i in 0..dm {
                if m[i] != 0 {
                    let sub = c * m[i] % p;
                    r[d - dm + i] = (r[d - dm + i] + p - sub) % p;
                }
            }
        }
        r.pop();
        fp_trim(&mut r);
    }
    r
}

fn fp_mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
    }
    fp_rem(&prod, m, p)
}

/// x^e mod m by square-and-multiply.
fn fp_pow_x_mod(e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64]; // 1
    let mut base = fp_rem(&[0, 1], m, p); // x mod m
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = fp_mul_mod(&result, &base, m, p);
        }
        base = fp_mul_mod(&base, &base, m, p);
        e >>= 1;
    }
    result
}

/// Compose g(h) mod m via Horner.
fn fp_compose_mod(g: &[u64], h: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut acc: Vec<u64> = Vec::new();
    for &c in g.iter().rev() {
        acc = fp_mul_mod(&acc, h, m, p);
        if c != 0 {
            if acc.is_empty() {
                acc = vec![c];
            } else {
                acc[0] = (acc[0] + c) % p;
            }
            fp_trim(&mut acc);
        }
    }
    acc
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x: Vec<u64> = a.to_vec();
    let mut y: Vec<u64> = b.to_vec();
    fp_trim(&mut x);
    fp_trim(&mut y);
    while !y.is_empty() {
        // make y monic for fp_rem
        let lead = *y.last().unwrap();
        let inv = mod_inv_u64(lead, p);
        let ym: Vec<u64> = y.iter().map(|&c| c * inv % p).collect();
        let r = fp_rem(&x, &ym, p);
        x = y;
        y = r;
    }
    // normalize monic
    if let Some(&lead) = x.last() {
        let inv = mod_inv_u64(lead, p);
        for c in &mut x {
            *c = *c * inv % p;
        }
    }
    x
}

fn mod_inv_u64(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Plain product of two F_p polynomials (no modulus reduction).
fn fp_mul_plain(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
    }
    fp_trim(&mut prod);
    prod
}

/// Quotient and remainder of F_p polynomials; b must be nonzero and trimmed.
fn fp_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let lead_inv = mod_inv_u64(b[db], p);
    let mut rem = a.to_vec();
    let mut quo = vec![0u64; a.len() - db];
    for d in (db..a.len()).rev() {
        let c = rem[d] * lead_inv % p;
        if c != 0 {
            quo[d - db] = c;
            for i in 0..=db {
                let sub = c * b[i] % p;
                rem[d - db + i] = (rem[d - db + i] + p - sub) % p;
            }
        }
    }
    rem.truncate(db);
    fp_trim(&mut rem);
    fp_trim(&mut quo);
    (quo, rem)
}

/// Inverse of a modulo the monic polynomial m over F_p, if coprime.
fn fp_poly_inverse_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    // Extended euclid, maintaining t_i with t_i * a == r_i (mod m).
    let mut r0: Vec<u64> = m.to_vec();
    fp_trim(&mut r0);
    let mut r1 = fp_rem(a, m, p);
    let mut t0: Vec<u64> = Vec::new(); // 0
    let mut t1: Vec<u64> = vec![1]; // 1
    while !r1.is_empty() {
        let (q, r) = fp_divmod(&r0, &r1, p);
        let qt = fp_rem(&fp_mul_plain(&q, &t1, p), m, p);
        // t_next = t0 - qt
        let mut t_next = t0.clone();
        if t_next.len() < qt.len() {
            t_next.resize(qt.len(), 0);
        }
        for (i, &c) in qt.iter().enumerate() {
            t_next[i] = (t_next[i] + p - c) % p;
        }
        fp_trim(&mut t_next);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t_next;
    }
    // r0 is the gcd; invertible iff it is a nonzero constant
    if r0.len() != 1 {
        return None;
    }
    let g_inv = mod_inv_u64(r0[0], p);
    let mut out: Vec<u64> = t0.iter().map(|&c| c * g_inv % p).collect();
    fp_trim(&mut out);
    Some(fp_rem(&out, m, p))
}

/// Rabin irreducibility test for a monic degree-s polynomial over F_p.
fn fp_is_irreducible(f: &[u64], p: u64, s: u32) -> bool {
    debug_assert_eq!(f.len(), s as usize + 1);
    debug_assert_eq!(f[s as usize], 1);
    // x^p mod f, then iterate Frobenius by composition to get x^(p^k) mod f.
    let xp = fp_pow_x_mod(p, f, p);
    let mut frob = vec![Vec::new(); s as usize + 1];
    frob[1] = xp.clone();
    for k in 2..=s as usize {
        frob[k] = fp_compose_mod(&frob[k - 1], &xp, f, p);
    }
    let x: Vec<u64> = vec![0, 1];
    // x^(p^s) == x (mod f) is necessary
    if frob[s as usize] != fp_rem(&x, f, p) {
        return false;
    }
    // and gcd(x^(p^(s/l)) - x, f) == 1 for every prime l dividing s
    for (l, _) in factor(s as u64) {
        let d = (s as u64 / l) as usize;
        let mut diff = frob[d].clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        fp_trim(&mut diff);
        let g = fp_gcd(&diff, f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The canonical modulus for GF(p^s): the lexicographically least monic
/// irreducible of degree s, where candidate coefficient tuples
/// (c_0, c_1, ..., c_{s-1}) are compared low-degree-first. Prime fields use
/// the degree-one polynomial x.
fn canonical_modulus(p: u64, s: u32) -> Vec<u64> {
    if s == 1 {
        return vec![0, 1];
    }
    let total = p.pow(s); // p^s <= 2^31, checked by caller
    for n in 0..total {
        // Decode n base p so that c_0 is the most significant digit; then
        // increasing n walks the tuples (c_0, ..., c_{s-1}) in lex order.
        let mut f = vec![0u64; s as usize + 1];
        f[s as usize] = 1;
        let mut v = n;
        for j in 0..s as usize {
            // digit j of n (least significant first) lands at c_{s-1-j},
            // making c_0 the most significant digit
            f[s as usize - 1 - j] = v % p;
            v /= p;
        }
        if fp_is_irreducible(&f, p, s) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

// ---------------------------------------------------------------------------
// polynomials over a finite field (packed coefficient values)
// ---------------------------------------------------------------------------

/// Dense polynomial over a `Field`, coefficients low-degree-first as packed
/// scalar values. The zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u32>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn from_scalars(field: &Field, coeffs: &[Scalar]) -> Result<Poly> {
        let mut vals = Vec::with_capacity(coeffs.len());
        for &c in coeffs {
            if !field.contains(c) {
                return Err(Error::FieldMismatch);
            }
            vals.push(c.value());
        }
        let mut poly = Poly {
            field: field.clone(),
            coeffs: vals,
        };
        poly.trim();
        Ok(poly)
    }

    pub(crate) fn from_values(field: &Field, coeffs: Vec<u32>) -> Poly {
        let mut poly = Poly {
            field: field.clone(),
            coeffs,
        };
        poly.trim();
        poly
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coefficients(&self) -> Vec<Scalar> {
        self.coeffs
            .iter()
            .map(|&v| Scalar {
                field: self.field.id(),
                value: v,
            })
            .collect()
    }

    fn spec(&self) -> &FieldSpec {
        &self.field.0
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let spec = self.spec();
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u32; n];
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            out[i] = spec.val_add(a, b);
        }
        Ok(Poly::from_values(&self.field, out))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let spec = self.spec();
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u32; n];
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            out[i] = spec.val_sub(a, b);
        }
        Ok(Poly::from_values(&self.field, out))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let spec = self.spec();
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    out[i + j] = spec.val_add(out[i + j], spec.val_mul(a, b));
                }
            }
        }
        Ok(Poly::from_values(&self.field, out))
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if self.field != divisor.field {
            return Err(Error::FieldMismatch);
        }
        if divisor.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let spec = self.spec();
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() < dd + 1 {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let lead_inv = spec
            .val_inv(*divisor.coeffs.last().unwrap())
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u32; self.coeffs.len() - dd];
        for d in (dd..self.coeffs.len()).rev() {
            let c = spec.val_mul(rem[d], lead_inv);
            if c != 0 {
                quo[d - dd] = c;
                for i in 0..=dd {
                    let sub = spec.val_mul(c, divisor.coeffs[i]);
                    rem[d - dd + i] = spec.val_sub(rem[d - dd + i], sub);
                }
            }
            debug_assert_eq!(rem[d], 0);
        }
        rem.truncate(dd);
        Ok((
            Poly::from_values(&self.field, quo),
            Poly::from_values(&self.field, rem),
        ))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Monic scalar multiple (zero stays zero).
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let spec = self.spec();
        let inv = spec.val_inv(*self.coeffs.last().unwrap()).unwrap();
        let coeffs = self.coeffs.iter().map(|&c| spec.val_mul(c, inv)).collect();
        Poly::from_values(&self.field, coeffs)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Least common multiple, monic.
    pub fn lcm(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let g = self.gcd(other)?;
        let (q, r) = self.divmod(&g)?;
        debug_assert!(r.is_zero());
        Ok(q.mul(other)?.monic())
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let spec = self.spec();
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            let mult = spec.val_mul((i as u64 % spec.p) as u32, c);
            out.push(mult);
        }
        Poly::from_values(&self.field, out)
    }

    /// True when gcd(f, f') = 1, i.e. f has no repeated irreducible factor.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Ok(false);
        }
        let d = self.derivative();
        if d.is_zero() {
            // f is a polynomial in x^p, hence a p-th power up to factors
            return Ok(self.degree() == Some(0));
        }
        let g = self.gcd(&d)?;
        Ok(g.degree() == Some(0))
    }

    pub fn eval(&self, at: Scalar) -> Result<Scalar> {
        if !self.field.contains(at) {
            return Err(Error::FieldMismatch);
        }
        let spec = self.spec();
        let mut acc = 0u32;
        for &c in self.coeffs.iter().rev() {
            acc = spec.val_add(spec.val_mul(acc, at.value()), c);
        }
        Ok(Scalar {
            field: self.field.id(),
            value: acc,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle for quadratic/cubic irreducibility: a degree-2 or
    /// degree-3 polynomial over F_p is irreducible exactly when it has no
    /// root. Used to cross-check the canonical modulus choice for GF(9).
    fn has_root_fp(f: &[u64], p: u64) -> bool {
        (0..p).any(|x| {
            let mut acc = 0u64;
            for &c in f.iter().rev() {
                acc = (acc * x + c) % p;
            }
            acc == 0
        })
    }

    #[test]
    fn gf9_modulus_is_least_rootless_quadratic() {
        // oracle: enumerate monic quadratics over F_3 in low-degree-first
        // lex order and take the first with no root
        let mut expected = None;
        'outer: for c0 in 0..3u64 {
            for c1 in 0..3u64 {
                let f = vec![c0, c1, 1];
                if !has_root_fp(&f, 3) {
                    expected = Some(f);
                    break 'outer;
                }
            }
        }
        let expected = expected.unwrap();
        assert_eq!(expected, vec![1, 0, 1]); // x^2 + 1, frozen
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.modulus_coeffs(), &[1, 0, 1]);
    }

    #[test]
    fn gf9_generator_squares_to_two() {
        // with modulus x^2 + 1 the class of x squares to -1 = 2
        let f9 = Field::new(3, 2).unwrap();
        let x = f9.scalar_from_coeffs(&[0, 1]).unwrap();
        assert_eq!(x.value(), 3); // packed as 0 + 1*3
        let sq = f9.mul(x, x).unwrap();
        assert_eq!(sq, f9.scalar_from_u64(2));
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.modulus_coeffs(), &[0, 1]);
        assert_eq!(f3.q(), 3);
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.add(f2.one(), f2.one()).unwrap(), f2.zero());
    }

    #[test]
    fn interning_returns_same_field() {
        let a = Field::new(5, 2).unwrap();
        let b = Field::new(5, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.id(), b.id());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Field::new(6, 1), Err(Error::NotPrime(6))));
        assert!(matches!(
            Field::new(2, 40),
            Err(Error::FieldTooLarge { .. })
        ));
        // 3^21 > 2^31 even if degree were allowed
        assert!(Field::new(46349, 3).is_err());
    }

    #[test]
    fn splitting_degrees_frozen() {
        // order of 3 mod 5: 3, 9=4, 27=2, 81=1 -> 4
        assert_eq!(splitting_degree(3, 5).unwrap(), 4);
        // order of 2 mod 7: 2, 4, 8=1 -> 3
        assert_eq!(splitting_degree(2, 7).unwrap(), 3);
        assert_eq!(splitting_degree(7, 1).unwrap(), 1);
        assert_eq!(splitting_degree(5, 2).unwrap(), 1);
        assert!(splitting_degree(3, 6).is_err()); // not coprime
    }

    #[test]
    fn inverse_and_fermat_in_gf81() {
        let f81 = Field::new(3, 4).unwrap();
        assert_eq!(f81.q(), 81);
        for v in 1..81u64 {
            let a = f81.scalar_from_packed(v).unwrap();
            let inv = f81.inv(a).unwrap();
            assert_eq!(f81.mul(a, inv).unwrap(), f81.one());
            assert_eq!(f81.pow(a, 80).unwrap(), f81.one());
        }
        assert!(matches!(f81.inv(f81.zero()), Err(Error::ZeroInverse)));
    }

    #[test]
    fn field_mismatch_detected() {
        let f3 = Field::new(3, 1).unwrap();
        let f5 = Field::new(5, 1).unwrap();
        let a = f3.one();
        let b = f5.one();
        assert!(matches!(f3.add(a, b), Err(Error::FieldMismatch)));
        assert!(matches!(f5.mul(a, b), Err(Error::FieldMismatch)));
    }

    #[test]
    fn element_of_order_examples() {
        let f81 = Field::new(3, 4).unwrap();
        let z5 = f81.element_of_order(5).unwrap();
        assert_eq!(f81.pow(z5, 5).unwrap(), f81.one());
        assert_ne!(z5, f81.one());
        // 5th roots of unity exist in GF(81) since 5 | 80
        let f7 = Field::new(7, 1).unwrap();
        let z3 = f7.element_of_order(3).unwrap();
        assert_eq!(f7.pow(z3, 3).unwrap(), f7.one());
        assert_ne!(f7.pow(z3, 1).unwrap(), f7.one());
        assert!(f7.element_of_order(5).is_err());
    }

    #[test]
    fn field_axioms_sampled() {
        // deterministic pseudo-random triples in GF(81) and GF(8)
        for field in [Field::new(3, 4).unwrap(), Field::new(2, 3).unwrap()] {
            let q = field.q();
            let mut state = 0x9e3779b97f4a7c15u64;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 33) % q
            };
            for _ in 0..200 {
                let a = field.scalar_from_packed(next()).unwrap();
                let b = field.scalar_from_packed(next()).unwrap();
                let c = field.scalar_from_packed(next()).unwrap();
                // associativity + commutativity + distributivity
                let ab = field.add(a, b).unwrap();
                assert_eq!(field.add(ab, c).unwrap(), field.add(a, field.add(b, c).unwrap()).unwrap());
                assert_eq!(field.add(a, b).unwrap(), field.add(b, a).unwrap());
                let mab = field.mul(a, b).unwrap();
                assert_eq!(field.mul(mab, c).unwrap(), field.mul(a, field.mul(b, c).unwrap()).unwrap());
                assert_eq!(mab, field.mul(b, a).unwrap());
                let lhs = field.mul(a, field.add(b, c).unwrap()).unwrap();
                let rhs = field.add(field.mul(a, b).unwrap(), field.mul(a, c).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                // frobenius is additive: (a+b)^p = a^p + b^p
                let p = field.p();
                let fr = field.pow(field.add(a, b).unwrap(), p).unwrap();
                let fr2 = field.add(field.pow(a, p).unwrap(), field.pow(b, p).unwrap()).unwrap();
                assert_eq!(fr, fr2);
            }
        }
    }

    #[test]
    fn poly_gcd_and_squarefree() {
        let f3 = Field::new(3, 1).unwrap();
        let s = |v: i64| f3.scalar_from_i64(v);
        // (x-1)^2 = x^2 - 2x + 1 = x^2 + x + 1 over F_3
        let sq = Poly::from_scalars(&f3, &[s(1), s(-2), s(1)]).unwrap();
        assert!(!sq.is_squarefree().unwrap());
        // x^2 - 1 = (x-1)(x+1) is squarefree
        let sf = Poly::from_scalars(&f3, &[s(-1), s(0), s(1)]).unwrap();
        assert!(sf.is_squarefree().unwrap());
        let g = sq.gcd(&sf).unwrap();
        // common factor x - 1 = x + 2
        assert_eq!(g.coefficients().len(), 2);
        assert_eq!(g.eval(s(1)).unwrap(), f3.zero());
        // lcm has degree 3
        let l = sq.lcm(&sf).unwrap();
        assert_eq!(l.degree(), Some(3));
    }

    #[test]
    fn poly_divmod_roundtrip() {
        let f5 = Field::new(5, 1).unwrap();
        let s = |v: i64| f5.scalar_from_i64(v);
        let a = Poly::from_scalars(&f5, &[s(3), s(1), s(4), s(1)]).unwrap();
        let b = Poly::from_scalars(&f5, &[s(2), s(1)]).unwrap();
        let (q, r) = a.divmod(&b).unwrap();
        let back = q.mul(&b).unwrap().add(&r).unwrap();
        assert_eq!(back, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gf4_and_gf64_moduli_are_irreducible_and_least() {
        // GF(4): monic quadratics over F_2 in lex order: x^2, x^2+1=(x+1)^2,
        // x^2+x=x(x+1), x^2+x+1 irreducible -> [1,1,1]
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.modulus_coeffs(), &[1, 1, 1]);
        let f64 = Field::new(2, 6).unwrap();
        // spot check: modulus must have no root in F_2
        let m = f64.modulus_coeffs();
        assert_ne!(m[0], 0); // f(0) != 0
        assert_eq!(m.iter().sum::<u64>() % 2, 1); // f(1) != 0
    }
}

