//! Finite abelian groups presented as products of cyclic groups.
//!
//! A group is an ordered list of cyclic factor orders (n_1, ..., n_k).
//! Elements are coordinate tuples with coords[i] in [0, n_i); all arithmetic
//! is componentwise modulo the factor orders. Grid positions are numbered by
//! the mixed-radix index with coords[0] most significant; that single
//! convention is shared by indexing, serialization and the field coordinate
//! map. For 2D displays coords = (row, column) and rows are counted upwards
//! from the bottom, which is purely a rendering concern.

use crate::arith::is_prime;
use crate::error::{Error, Result};

/// Hard cap on the group order so index tables stay addressable.
pub const MAX_ORDER: usize = 1 << 24;

/// A finite abelian group Z_{n1} x ... x Z_{nk}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<u32>,
    order: usize,
}

impl GroupSpec {
    /// Builds a group from its cyclic factor orders. Every factor must be at
    /// least 2 and the total order at least 4.
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("no factors given".into()));
        }
        if let Some(&f) = factors.iter().find(|&&f| f < 2) {
            return Err(Error::InvalidGroup(format!("factor {f} < 2")));
        }
        let mut order: usize = 1;
        for &f in &factors {
            order = order
                .checked_mul(f as usize)
                .filter(|&o| o <= MAX_ORDER)
                .ok_or(Error::SizeCapExceeded {
                    what: "group order",
                    got: u64::MAX,
                    cap: MAX_ORDER as u64,
                })?;
        }
        if order < 4 {
            return Err(Error::InvalidGroup(format!(
                "order {order} < 4 is too small for a periodic Costas array"
            )));
        }
        Ok(GroupSpec { factors, order })
    }

    /// The elementary abelian group (Z_p)^m.
    pub fn elementary(p: u32, m: usize) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Self::new(vec![p; m])
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The codomain modulus of a periodic Costas array over this group.
    pub fn modulus(&self) -> u32 {
        (self.order - 1) as u32
    }

    /// Some(p) iff all factors equal the same prime p.
    pub fn elementary_prime(&self) -> Option<u32> {
        let p = self.factors[0];
        if self.factors.iter().all(|&f| f == p) && is_prime(p as u64) {
            Some(p)
        } else {
            None
        }
    }

    pub fn is_elementary_abelian(&self) -> bool {
        self.elementary_prime().is_some()
    }

    fn check_dims(&self, a: &[u32]) -> Result<()> {
        if a.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                got: a.len(),
            });
        }
        Ok(())
    }

    /// Mixed-radix index of a coordinate tuple, coords[0] most significant.
    pub fn index(&self, coords: &[u32]) -> Result<usize> {
        self.check_dims(coords)?;
        let mut idx = 0usize;
        for (&c, &f) in coords.iter().zip(&self.factors) {
            if c >= f {
                return Err(Error::ValueOutOfRange {
                    value: c as u64,
                    modulus: f as u64,
                });
            }
            idx = idx * f as usize + c as usize;
        }
        Ok(idx)
    }

    /// Inverse of [`index`](Self::index).
    pub fn unindex(&self, index: usize) -> Result<Vec<u32>> {
        if index >= self.order {
            return Err(Error::IndexOutOfRange {
                index,
                order: self.order,
            });
        }
        let mut coords = vec![0u32; self.factors.len()];
        let mut rest = index;
        for (slot, &f) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = (rest % f as usize) as u32;
            rest /= f as usize;
        }
        Ok(coords)
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.factors.len()]
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
        self.check_dims(a)?;
        self.check_dims(b)?;
        Ok(a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((&x, &y), &f)| (x + y) % f)
            .collect())
    }

    pub fn sub(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
        self.check_dims(a)?;
        self.check_dims(b)?;
        Ok(a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((&x, &y), &f)| (x + f - y) % f)
            .collect())
    }

    pub fn neg(&self, a: &[u32]) -> Result<Vec<u32>> {
        self.check_dims(a)?;
        Ok(a.iter()
            .zip(&self.factors)
            .map(|(&x, &f)| (f - x) % f)
            .collect())
    }

    /// Componentwise sum of two positions given as mixed-radix indices.
    pub fn add_index(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.order && b < self.order);
        let mut out = 0usize;
        let mut mul = 1usize;
        let (mut ra, mut rb) = (a, b);
        for &f in self.factors.iter().rev() {
            let f = f as usize;
            out += (ra % f + rb % f) % f * mul;
            mul *= f;
            ra /= f;
            rb /= f;
        }
        out
    }

    /// Componentwise difference a - b on mixed-radix indices.
    pub fn sub_index(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.order && b < self.order);
        let mut out = 0usize;
        let mut mul = 1usize;
        let (mut ra, mut rb) = (a, b);
        for &f in self.factors.iter().rev() {
            let f = f as usize;
            out += (ra % f + f - rb % f) % f * mul;
            mul *= f;
            ra /= f;
            rb /= f;
        }
        out
    }

    /// Compact `n1,n2,...,nk` form, also accepted by [`std::str::FromStr`].
    pub fn display_compact(&self) -> String {
        self.factors
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl std::fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Z_{}", self.factors[0])?;
        for n in &self.factors[1..] {
            write!(f, " x Z_{n}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidGroup(format!("bad factor {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        GroupSpec::new(factors)
    }
}

/// All factor sequences (each factor >= 2) with order in [4, max_order].
/// Test helper shared across modules.
#[cfg(test)]
pub(crate) fn all_specs_up_to(max_order: usize) -> Vec<GroupSpec> {
    fn extend(prefix: &mut Vec<u32>, product: usize, max: usize, out: &mut Vec<Vec<u32>>) {
        if product >= 4 && !prefix.is_empty() {
            out.push(prefix.clone());
        }
        let mut f = 2u32;
        while product * f as usize <= max {
            prefix.push(f);
            extend(prefix, product * f as usize, max, out);
            prefix.pop();
            f += 1;
        }
    }
    let mut raw = Vec::new();
    extend(&mut Vec::new(), 1, max_order, &mut raw);
    raw.into_iter().map(|f| GroupSpec::new(f).unwrap()).collect()
}
