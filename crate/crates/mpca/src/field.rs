//! GF(p^m) arithmetic via primitive polynomials, and the exp/log tables that
//! link field elements to grid coordinates.
//!
//! A degree-m monic polynomial is encoded by its low coefficients
//! `c_0..c_{m-1}` over Z_p, read as alpha^m = c_{m-1} alpha^{m-1} + ... + c_0.
//! A field element a_1 alpha^{m-1} + ... + a_m is identified with the
//! coordinate tuple (a_1, ..., a_m) on the (Z_p)^m grid, so its mixed-radix
//! position index equals the plain base-p integer code sum(c_j p^j) of its
//! coefficient vector. Tables are built for an arbitrary log base
//! beta = alpha^e with gcd(e, p^m - 1) = 1.

use crate::arith::{distinct_prime_factors, gcd, is_prime};
use crate::error::{Error, Result};

/// Cap on the field size for table construction and polynomial searches.
pub const MAX_FIELD: u64 = 1 << 20;

/// A primitive polynomial presentation of GF(p^m).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    m: usize,
    modulus: Vec<u32>,
}

impl FieldSpec {
    /// Validates that p is prime and the encoded monic polynomial is
    /// primitive (its root has multiplicative order p^m - 1).
    pub fn new(p: u32, m: usize, modulus: Vec<u32>) -> Result<Self> {
        match poly_is_primitive(p, m, &modulus)? {
            true => Ok(FieldSpec { p, m, modulus }),
            false => Err(Error::NotPrimitive {
                p,
                reason: format!("coefficients {modulus:?}"),
            }),
        }
    }

    /// Lexicographically smallest primitive polynomial of degree m over Z_p.
    pub fn default_poly(p: u32, m: usize) -> Result<Self> {
        let polys = find_primitive_polys(p, m)?;
        let modulus = polys.into_iter().next().ok_or(Error::NotPrimitive {
            p,
            reason: format!("no primitive polynomial of degree {m}"),
        })?;
        Ok(FieldSpec { p, m, modulus })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// Low coefficients c_0..c_{m-1} of the modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// p^m.
    pub fn field_order(&self) -> usize {
        (self.p as usize).pow(self.m as u32)
    }

    /// p^m - 1, the order of the multiplicative group.
    pub fn unit_order(&self) -> u64 {
        self.field_order() as u64 - 1
    }
}

fn check_poly_args(p: u32, m: usize, coeffs: &[u32]) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if m == 0 {
        return Err(Error::InvalidConfig("polynomial degree must be >= 1".into()));
    }
    if coeffs.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: coeffs.len(),
        });
    }
    if let Some(&c) = coeffs.iter().find(|&&c| c >= p) {
        return Err(Error::ValueOutOfRange {
            value: c as u64,
            modulus: p as u64,
        });
    }
    let size = (p as u64).checked_pow(m as u32);
    match size {
        Some(s) if s <= MAX_FIELD => Ok(()),
        _ => Err(Error::SizeCapExceeded {
            what: "field order",
            got: size.unwrap_or(u64::MAX),
            cap: MAX_FIELD,
        }),
    }
}

// Elements below are low-first coefficient vectors of length m.

/// Multiply by the polynomial root: shift up one degree and reduce once.
fn mul_by_alpha(v: &[u32], p: u32, modulus: &[u32]) -> Vec<u32> {
    let m = v.len();
    let carry = v[m - 1];
    let mut out = vec![0u32; m];
    out[1..m].copy_from_slice(&v[..m - 1]);
    for (slot, &q) in out.iter_mut().zip(modulus) {
        *slot = (*slot + carry * q) % p;
    }
    out
}

/// Full polynomial product reduced by the modulus. Independent of the
/// shift-based chain used to build tables; tests use it as the oracle.
fn poly_mul_mod(a: &[u32], b: &[u32], p: u32, modulus: &[u32]) -> Vec<u32> {
    let m = a.len();
    let mut conv = vec![0u64; 2 * m - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            conv[i + j] += x as u64 * y as u64;
        }
    }
    // eliminate degrees 2m-2 .. m with alpha^m = modulus
    for d in (m..2 * m - 1).rev() {
        let t = conv[d] % p as u64;
        conv[d] = 0;
        for i in 0..m {
            conv[d - m + i] += t * modulus[i] as u64;
        }
    }
    conv[..m].iter().map(|&c| (c % p as u64) as u32).collect()
}

fn poly_pow_mod(base: &[u32], mut exp: u64, p: u32, modulus: &[u32]) -> Vec<u32> {
    let m = base.len();
    let mut acc = vec![0u32; m];
    acc[0] = 1;
    let mut sq = base.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul_mod(&acc, &sq, p, modulus);
        }
        sq = poly_mul_mod(&sq, &sq, p, modulus);
        exp >>= 1;
    }
    acc
}

fn is_one(v: &[u32]) -> bool {
    v[0] == 1 && v[1..].iter().all(|&c| c == 0)
}

/// The root element itself, reduced: x for m >= 2, the constant c_0 for m = 1.
fn alpha_element(m: usize, modulus: &[u32]) -> Vec<u32> {
    let mut v = vec![0u32; m];
    if m == 1 {
        v[0] = modulus[0];
    } else {
        v[1] = 1;
    }
    v
}

/// True iff the monic polynomial encoded by `coeffs` is primitive over Z_p:
/// its root is a unit of multiplicative order exactly p^m - 1 in
/// Z_p[x]/(f), which forces f irreducible as well.
pub fn poly_is_primitive(p: u32, m: usize, coeffs: &[u32]) -> Result<bool> {
    check_poly_args(p, m, coeffs)?;
    let n = (p as u64).pow(m as u32) - 1;
    let alpha = alpha_element(m, coeffs);
    if !is_one(&poly_pow_mod(&alpha, n, p, coeffs)) {
        return Ok(false);
    }
    for q in distinct_prime_factors(n) {
        if is_one(&poly_pow_mod(&alpha, n / q, p, coeffs)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All primitive polynomials of degree m over Z_p, as coefficient lists
/// c_0..c_{m-1} in lexicographic order. There are phi(p^m - 1)/m of them.
pub fn find_primitive_polys(p: u32, m: usize) -> Result<Vec<Vec<u32>>> {
    check_poly_args(p, m, &vec![0; m])?;
    let total = (p as u64).pow(m as u32);
    let mut out = Vec::new();
    for code in 0..total {
        // decode with c_0 as the most significant digit: lexicographic order
        let mut coeffs = vec![0u32; m];
        let mut rest = code;
        for slot in coeffs.iter_mut().rev() {
            *slot = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        if poly_is_primitive(p, m, &coeffs)? {
            out.push(coeffs);
        }
    }
    Ok(out)
}

/// Grid coordinates (a_1, ..., a_m) of the element with integer code
/// sum(c_j p^j); coords[0] carries the highest basis power.
pub fn code_to_coords(p: u32, m: usize, code: usize) -> Vec<u32> {
    let mut coords = vec![0u32; m];
    let mut rest = code;
    for slot in coords.iter_mut().rev() {
        *slot = (rest % p as usize) as u32;
        rest /= p as usize;
    }
    coords
}

pub fn coords_to_code(p: u32, coords: &[u32]) -> usize {
    coords
        .iter()
        .fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

/// Exp/log tables for GF(p^m) with log base beta = alpha^logBaseExp.
///
/// `exp[i]` is the integer code (= grid position index) of beta^i and `log`
/// is its inverse over the nonzero codes.
#[derive(Debug, Clone)]
pub struct FieldTable {
    spec: FieldSpec,
    log_base_exp: u64,
    exp: Vec<usize>,
    log: Vec<Option<u32>>,
}

fn low_to_code(p: u32, low: &[u32]) -> usize {
    low.iter()
        .rev()
        .fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

impl FieldTable {
    /// Requires gcd(logBaseExp, p^m - 1) = 1 so beta is itself primitive.
    pub fn build(spec: FieldSpec, log_base_exp: u64) -> Result<Self> {
        let n = spec.unit_order();
        let g = gcd(log_base_exp, n);
        if g != 1 {
            return Err(Error::NotAUnit {
                value: log_base_exp,
                modulus: n,
                gcd: g,
            });
        }
        let e = log_base_exp % n;
        // chain of alpha powers by repeated shift-reduce
        let mut chain = Vec::with_capacity(n as usize);
        let mut elem = vec![0u32; spec.m];
        elem[0] = 1;
        for _ in 0..n {
            chain.push(low_to_code(spec.p, &elem));
            elem = mul_by_alpha(&elem, spec.p, &spec.modulus);
        }
        debug_assert!(is_one(&elem), "root order differs from p^m - 1");

        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![None; spec.field_order()];
        for i in 0..n {
            let code = chain[(e * i % n) as usize];
            debug_assert!(log[code].is_none());
            log[code] = Some(i as u32);
            exp.push(code);
        }
        Ok(FieldTable {
            spec,
            log_base_exp,
            exp,
            log,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn log_base_exp(&self) -> u64 {
        self.log_base_exp
    }

    /// Position index of beta^i (i reduced mod p^m - 1).
    pub fn exp_index(&self, i: u64) -> usize {
        self.exp[(i % self.spec.unit_order()) as usize]
    }

    pub fn exp_coords(&self, i: u64) -> Vec<u32> {
        code_to_coords(self.spec.p, self.spec.m, self.exp_index(i))
    }

    /// Discrete log of the element at a position index; None for zero.
    pub fn log_index(&self, position: usize) -> Option<u64> {
        self.log.get(position).copied().flatten().map(u64::from)
    }

    pub fn log_coords(&self, coords: &[u32]) -> Result<Option<u64>> {
        if coords.len() != self.spec.m {
            return Err(Error::DimensionMismatch {
                expected: self.spec.m,
                got: coords.len(),
            });
        }
        if let Some(&c) = coords.iter().find(|&&c| c >= self.spec.p) {
            return Err(Error::ValueOutOfRange {
                value: c as u64,
                modulus: self.spec.p as u64,
            });
        }
        Ok(self.log_index(coords_to_code(self.spec.p, coords)))
    }
}

/// Product of two field elements given by integer codes, computed by full
/// polynomial multiplication modulo the defining polynomial.
pub fn multiply(spec: &FieldSpec, a: usize, b: usize) -> usize {
    let to_low = |code: usize| {
        let mut v = code_to_coords(spec.p, spec.m, code);
        v.reverse();
        v
    };
    let prod = poly_mul_mod(&to_low(a), &to_low(b), spec.p, &spec.modulus);
    let mut msb = prod;
    msb.reverse();
    coords_to_code(spec.p, &msb)
}

/// Row-major matrix of the Frobenius automorphism x -> x^p acting on grid
/// coordinates.
pub fn frobenius_matrix(spec: &FieldSpec) -> Vec<u32> {
    let m = spec.m;
    let n = spec.unit_order();
    let alpha = alpha_element(m, &spec.modulus);
    let mut entries = vec![0u32; m * m];
    for k in 0..m {
        // column k is the image of the basis element alpha^{m-1-k}
        let exp = (spec.p as u64) * (m - 1 - k) as u64 % n;
        let mut image = poly_pow_mod(&alpha, exp, spec.p, &spec.modulus);
        image.reverse();
        for r in 0..m {
            entries[r * m + k] = image[r];
        }
    }
    entries
}
