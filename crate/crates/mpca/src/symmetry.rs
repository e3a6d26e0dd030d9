//! Symmetry generators acting on periodic Costas arrays, and orbit closure
//! under exhaustively instantiated generator families.
//!
//! Value-side generators rewrite residues modulo order-1: addition of a
//! constant and multiplication by a unit. Position-side generators permute
//! the grid of an elementary abelian group (Z_p)^m through an invertible
//! linear map L, carrying f to f' with f'(L a) = f(a). The diagonal maps
//! (nonzero diagonal, zero elsewhere) scale each axis independently; the
//! unit-diagonal maps shear each axis by the others. Translations move the
//! star and leave the generic class.

use crate::arith::{gcd, mod_inverse};
use crate::array::PeriodicArray;
use crate::error::{Error, Result};
use crate::grid::GroupSpec;
use std::collections::BTreeSet;

/// An invertible m x m matrix over Z_p acting on grid coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearMap {
    p: u32,
    dim: usize,
    entries: Vec<u32>, // row-major
}

impl LinearMap {
    /// Rejects non-square data, out-of-range entries and singular matrices.
    pub fn new(p: u32, dim: usize, entries: Vec<u32>) -> Result<Self> {
        if !crate::arith::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if let Some(&e) = entries.iter().find(|&&e| e >= p) {
            return Err(Error::ValueOutOfRange {
                value: e as u64,
                modulus: p as u64,
            });
        }
        let map = LinearMap { p, dim, entries };
        if map.det() == 0 {
            return Err(Error::SingularMap { p });
        }
        Ok(map)
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: rows.iter().map(Vec::len).max().unwrap_or(0),
            });
        }
        Self::new(p, dim, rows.concat())
    }

    pub fn identity(p: u32, dim: usize) -> Self {
        let mut entries = vec![0u32; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        LinearMap { p, dim, entries }
    }

    /// Diagonal map with the given nonzero scale factors.
    pub fn diagonal(p: u32, scales: &[u32]) -> Result<Self> {
        let dim = scales.len();
        let mut entries = vec![0u32; dim * dim];
        for (i, &x) in scales.iter().enumerate() {
            if x == 0 {
                return Err(Error::SingularMap { p });
            }
            entries[i * dim + i] = x;
        }
        Self::new(p, dim, entries)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> u32 {
        self.entries[row * self.dim + col]
    }

    /// Determinant modulo p by Gaussian elimination.
    pub fn det(&self) -> u32 {
        let p = self.p as u64;
        let n = self.dim;
        let mut a: Vec<u64> = self.entries.iter().map(|&e| e as u64).collect();
        let mut det = 1u64;
        for col in 0..n {
            let pivot = match (col..n).find(|&r| a[r * n + col] % p != 0) {
                Some(r) => r,
                None => return 0,
            };
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                }
                det = det * (p - 1) % p;
            }
            let pv = a[col * n + col] % p;
            det = det * pv % p;
            let inv = mod_inverse(pv, p).expect("pivot is a unit");
            for r in col + 1..n {
                let factor = a[r * n + col] % p * inv % p;
                for c in col..n {
                    a[r * n + c] = (a[r * n + c] + (p - factor) * a[col * n + c]) % p;
                }
            }
        }
        det as u32
    }

    /// Houses the axis-scaling family: diagonal with nonzero diagonal.
    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| {
            (0..self.dim).all(|c| if r == c { self.entry(r, c) != 0 } else { self.entry(r, c) == 0 })
        })
    }

    /// Houses the shear family: every diagonal entry equal to 1.
    pub fn is_unit_diagonal(&self) -> bool {
        (0..self.dim).all(|i| self.entry(i, i) == 1)
    }

    /// Matrix-vector product over Z_p.
    pub fn apply(&self, coords: &[u32]) -> Vec<u32> {
        debug_assert_eq!(coords.len(), self.dim);
        self.entries
            .chunks(self.dim)
            .map(|row| {
                let acc: u64 = row
                    .iter()
                    .zip(coords)
                    .map(|(&e, &c)| e as u64 * c as u64)
                    .sum();
                (acc % self.p as u64) as u32
            })
            .collect()
    }

    /// Gauss-Jordan inverse; always defined since construction rejects
    /// singular maps.
    pub fn inverse(&self) -> LinearMap {
        let p = self.p as u64;
        let n = self.dim;
        let mut a: Vec<u64> = self.entries.iter().map(|&e| e as u64).collect();
        let mut inv: Vec<u64> = LinearMap::identity(self.p, n)
            .entries
            .iter()
            .map(|&e| e as u64)
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r * n + col] % p != 0)
                .expect("map is invertible");
            for c in 0..n {
                a.swap(pivot * n + c, col * n + c);
                inv.swap(pivot * n + c, col * n + c);
            }
            let pinv = mod_inverse(a[col * n + col], p).expect("pivot is a unit");
            for c in 0..n {
                a[col * n + c] = a[col * n + c] * pinv % p;
                inv[col * n + c] = inv[col * n + c] * pinv % p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col] % p;
                if factor == 0 {
                    continue;
                }
                for c in 0..n {
                    a[r * n + c] = (a[r * n + c] + (p - factor) * a[col * n + c] % p) % p;
                    inv[r * n + c] = (inv[r * n + c] + (p - factor) * inv[col * n + c] % p) % p;
                }
            }
        }
        LinearMap {
            p: self.p,
            dim: n,
            entries: inv.into_iter().map(|e| e as u32).collect(),
        }
    }

    /// self * other, so applying the result equals applying `other` first.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.p != other.p || self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let n = self.dim;
        let p = self.p as u64;
        let mut entries = vec![0u32; n * n];
        for r in 0..n {
            for c in 0..n {
                let mut acc = 0u64;
                for k in 0..n {
                    acc += self.entry(r, k) as u64 * other.entry(k, c) as u64;
                }
                entries[r * n + c] = (acc % p) as u32;
            }
        }
        Ok(LinearMap {
            p: self.p,
            dim: n,
            entries,
        })
    }
}

/// One instance of a symmetry generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SymmetryOp {
    /// f + s (mod order-1).
    Add(u32),
    /// k * f (mod order-1), k a unit.
    Mul(u32),
    /// Coordinate permutation by an invertible linear map.
    Linear(LinearMap),
    /// Grid translation; moves the star.
    Translate(Vec<u32>),
}

/// Adds a constant to every value, star unchanged.
pub fn apply_add(arr: &PeriodicArray, s: u32) -> Result<PeriodicArray> {
    let m = arr.modulus();
    if s >= m {
        return Err(Error::ValueOutOfRange {
            value: s as u64,
            modulus: m as u64,
        });
    }
    let values = arr
        .raw_values()
        .iter()
        .map(|&v| (v + s) % m)
        .collect();
    PeriodicArray::new(arr.spec().clone(), arr.star_index(), values)
}

/// Multiplies every value by a unit modulo order-1, star unchanged.
pub fn apply_mul(arr: &PeriodicArray, k: u32) -> Result<PeriodicArray> {
    let m = arr.modulus();
    if k >= m {
        return Err(Error::ValueOutOfRange {
            value: k as u64,
            modulus: m as u64,
        });
    }
    let g = gcd(k as u64, m as u64);
    if g != 1 {
        return Err(Error::NotAUnit {
            value: k as u64,
            modulus: m as u64,
            gcd: g,
        });
    }
    let values = arr
        .raw_values()
        .iter()
        .map(|&v| ((v as u64 * k as u64) % m as u64) as u32)
        .collect();
    PeriodicArray::new(arr.spec().clone(), arr.star_index(), values)
}

/// Permutes grid positions by an invertible linear map: f'(L a) = f(a).
/// Requires a generic array over an elementary abelian group matching the
/// map's prime and dimension.
pub fn apply_linear(arr: &PeriodicArray, map: &LinearMap) -> Result<PeriodicArray> {
    let spec = arr.spec();
    let p = spec
        .elementary_prime()
        .ok_or_else(|| Error::NonElementaryGroup(spec.to_string()))?;
    if p != map.p() || spec.rank() != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.rank(),
            got: map.dim(),
        });
    }
    if !arr.is_generic() {
        return Err(Error::StarNotAtOrigin(format!("{:?}", arr.star_coords())));
    }
    let mut values = vec![0u32; spec.order()];
    for a in 1..spec.order() {
        let image = spec.index(&map.apply(&spec.unindex(a)?))?;
        values[image] = arr.raw_values()[a];
    }
    PeriodicArray::new(spec.clone(), 0, values)
}

/// Shifts the whole grid: f'(a) = f(a + v); the star moves to star - v.
pub fn apply_translate(arr: &PeriodicArray, v: &[u32]) -> Result<PeriodicArray> {
    let spec = arr.spec();
    let shift = spec.index(v)?;
    let new_star = spec.sub_index(arr.star_index(), shift);
    let mut values = vec![0u32; spec.order()];
    for a in 0..spec.order() {
        let b = spec.add_index(a, shift);
        if b != arr.star_index() {
            values[a] = arr.raw_values()[b];
        }
    }
    PeriodicArray::new(spec.clone(), new_star, values)
}

pub fn apply_op(arr: &PeriodicArray, op: &SymmetryOp) -> Result<PeriodicArray> {
    match op {
        SymmetryOp::Add(s) => apply_add(arr, *s),
        SymmetryOp::Mul(k) => apply_mul(arr, *k),
        SymmetryOp::Linear(map) => apply_linear(arr, map),
        SymmetryOp::Translate(v) => apply_translate(arr, v),
    }
}

/// The four generator families acting on generic arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GeneratorFamily {
    Add,
    Mul,
    G1,
    G2,
}

impl std::str::FromStr for GeneratorFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "add" => Ok(GeneratorFamily::Add),
            "mul" => Ok(GeneratorFamily::Mul),
            "g1" => Ok(GeneratorFamily::G1),
            "g2" => Ok(GeneratorFamily::G2),
            other => Err(Error::InvalidConfig(format!(
                "unknown generator family {other:?}"
            ))),
        }
    }
}

fn elementary_for(spec: &GroupSpec) -> Result<(u32, usize)> {
    spec.elementary_prime()
        .map(|p| (p, spec.rank()))
        .ok_or_else(|| Error::NonElementaryGroup(spec.to_string()))
}

/// Every tuple in {lo, ..., hi-1}^len, lexicographic.
fn tuples(len: usize, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            for v in lo..hi {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Exhaustively instantiates one generator family over a group:
/// order-1 additions, phi(order-1) unit multiplications, (p-1)^m diagonal
/// maps, and every invertible unit-diagonal map other than the identity.
pub fn generator_instances(spec: &GroupSpec, family: GeneratorFamily) -> Result<Vec<SymmetryOp>> {
    let modulus = spec.modulus();
    match family {
        GeneratorFamily::Add => Ok((0..modulus).map(SymmetryOp::Add).collect()),
        GeneratorFamily::Mul => Ok((1..modulus)
            .filter(|&k| gcd(k as u64, modulus as u64) == 1)
            .map(SymmetryOp::Mul)
            .collect()),
        GeneratorFamily::G1 => {
            let (p, m) = elementary_for(spec)?;
            Ok(tuples(m, 1, p)
                .into_iter()
                .map(|scales| {
                    SymmetryOp::Linear(LinearMap::diagonal(p, &scales).expect("nonzero diagonal"))
                })
                .collect())
        }
        GeneratorFamily::G2 => {
            let (p, m) = elementary_for(spec)?;
            let slots = m * m - m;
            let mut out = Vec::new();
            for off in tuples(slots, 0, p) {
                if off.iter().all(|&x| x == 0) {
                    continue; // identity lives in the diagonal family
                }
                let mut entries = vec![0u32; m * m];
                let mut it = off.into_iter();
                for r in 0..m {
                    for c in 0..m {
                        entries[r * m + c] = if r == c { 1 } else { it.next().unwrap() };
                    }
                }
                match LinearMap::new(p, m, entries) {
                    Ok(map) => out.push(SymmetryOp::Linear(map)),
                    Err(Error::SingularMap { .. }) => continue,
                    Err(e) => return Err(e),
                }
            }
            Ok(out)
        }
    }
}

/// Least set of canonical forms containing the seeds and closed under every
/// instance of the requested generator families; breadth-first with a
/// deterministic canonical-byte sweep order. With `include_translations` the
/// closure also applies every nonzero translation; linear maps are then only
/// applied to members that are still generic.
pub fn orbit_closure(
    seeds: &[PeriodicArray],
    families: &[GeneratorFamily],
    include_translations: bool,
) -> Result<BTreeSet<Vec<u8>>> {
    let mut known = BTreeSet::new();
    let Some(first) = seeds.first() else {
        return Ok(known);
    };
    let spec = first.spec().clone();
    for seed in seeds {
        if seed.spec() != &spec {
            return Err(Error::InvalidSeeds(format!(
                "seed over {} mixed with seeds over {}",
                seed.spec(),
                spec
            )));
        }
        if !seed.is_generic() {
            return Err(Error::InvalidSeeds(format!(
                "seed star at {:?}, expected the group zero",
                seed.star_coords()
            )));
        }
        known.insert(seed.canonical_bytes());
    }

    let mut fams: Vec<GeneratorFamily> = families.to_vec();
    fams.sort();
    fams.dedup();
    let mut instances = Vec::new();
    for fam in fams {
        instances.extend(generator_instances(&spec, fam)?);
    }
    if include_translations {
        for v in 1..spec.order() {
            instances.push(SymmetryOp::Translate(spec.unindex(v)?));
        }
    }

    let mut frontier: Vec<PeriodicArray> = seeds.to_vec();
    frontier.sort_by_key(PeriodicArray::canonical_bytes);
    frontier.dedup();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for arr in &frontier {
            for op in &instances {
                if matches!(op, SymmetryOp::Linear(_)) && !arr.is_generic() {
                    continue;
                }
                let image = apply_op(arr, op)?;
                if known.insert(image.canonical_bytes()) {
                    next.push(image);
                }
            }
        }
        next.sort_by_key(PeriodicArray::canonical_bytes);
        frontier = next;
    }
    Ok(known)
}
