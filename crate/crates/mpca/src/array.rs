//! The periodic Costas array value type: distinct-difference verifier,
//! periodic autocorrelation, and the canonical serialization used for orbit
//! deduplication.
//!
//! Canonical text format (UTF-8, LF line endings, bit-exact for dedupe):
//!
//! ```text
//! MPCA <n1> <n2> ... <nk>
//! MOD <order-1>
//! STAR <c1> <c2> ... <ck>
//! VALUES <t0> <t1> ... <t(order-1)>
//! ```
//!
//! Values are listed row-major by mixed-radix position index; the star
//! position's token is `*`, all others are decimal residues modulo order-1.

use crate::error::{Error, Result};
use crate::grid::GroupSpec;
use sha2::{Digest, Sha256};

/// A periodic Costas array candidate over a finite abelian group: a bijection
/// from the grid positions other than the star to Z_{order-1}.
///
/// The array is *generic* when the star sits at the group zero; translations
/// produce *general* arrays with the star anywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicArray {
    spec: GroupSpec,
    star: usize,
    values: Vec<u32>,
}

/// Summary of a full periodic autocorrelation sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationReport {
    /// Correlation at zero shift: the number of defined positions, order - 1.
    pub peak: usize,
    /// Largest correlation over all nonzero shifts.
    pub max_off_peak: usize,
    /// First shift attaining the maximum, smallest (position index, value
    /// offset) pair in mixed-radix order.
    pub worst_shift: (Vec<u32>, u32),
}

impl PeriodicArray {
    /// Builds an array from the star position index and a position-indexed
    /// value vector. `values[star]` is ignored and normalized to 0; all other
    /// entries must form a bijection onto [0, order-1).
    pub fn new(spec: GroupSpec, star: usize, mut values: Vec<u32>) -> Result<Self> {
        let order = spec.order();
        let modulus = spec.modulus();
        if star >= order {
            return Err(Error::IndexOutOfRange { index: star, order });
        }
        if values.len() != order {
            return Err(Error::InvalidArray(format!(
                "expected {order} value slots, got {}",
                values.len()
            )));
        }
        let mut seen = vec![false; modulus as usize];
        for (pos, &v) in values.iter().enumerate() {
            if pos == star {
                continue;
            }
            if v >= modulus {
                return Err(Error::ValueOutOfRange {
                    value: v as u64,
                    modulus: modulus as u64,
                });
            }
            if seen[v as usize] {
                return Err(Error::InvalidArray(format!("value {v} assigned twice")));
            }
            seen[v as usize] = true;
        }
        values[star] = 0;
        Ok(PeriodicArray { spec, star, values })
    }

    pub fn from_star_coords(spec: GroupSpec, star: &[u32], values: Vec<u32>) -> Result<Self> {
        let star = spec.index(star)?;
        Self::new(spec, star, values)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn modulus(&self) -> u32 {
        self.spec.modulus()
    }

    pub fn star_index(&self) -> usize {
        self.star
    }

    pub fn star_coords(&self) -> Vec<u32> {
        self.spec.unindex(self.star).expect("star in range")
    }

    /// True iff the star is at the group zero.
    pub fn is_generic(&self) -> bool {
        self.star == 0
    }

    /// Value at a position index; None at the star.
    pub fn value_at(&self, position: usize) -> Option<u32> {
        if position == self.star {
            None
        } else {
            self.values.get(position).copied()
        }
    }

    pub fn value_at_coords(&self, coords: &[u32]) -> Result<Option<u32>> {
        Ok(self.value_at(self.spec.index(coords)?))
    }

    pub(crate) fn raw_values(&self) -> &[u32] {
        &self.values
    }

    /// Distinct difference property: for every nonzero grid shift h, the
    /// differences f(a+h) - f(a) mod (order-1) are pairwise distinct over all
    /// a with both a and a+h defined. Exhaustive O(order^2) check.
    pub fn verify(&self) -> bool {
        let order = self.spec.order();
        let modulus = self.spec.modulus();
        let mut stamp = vec![0u32; modulus as usize];
        let mut generation = 0u32;
        for h in 1..order {
            generation += 1;
            for a in 0..order {
                if a == self.star {
                    continue;
                }
                let b = self.spec.add_index(a, h);
                if b == self.star {
                    continue;
                }
                let d = (self.values[b] + modulus - self.values[a]) % modulus;
                if stamp[d as usize] == generation {
                    return false;
                }
                stamp[d as usize] = generation;
            }
        }
        true
    }

    /// Periodic autocorrelation at shift (h, s): the number of positions a
    /// with a and a+h defined and f(a+h) = f(a) + s (mod order-1).
    pub fn autocorrelation(&self, h: &[u32], s: u32) -> Result<usize> {
        let h = self.spec.index(h)?;
        if s >= self.modulus() {
            return Err(Error::ValueOutOfRange {
                value: s as u64,
                modulus: self.modulus() as u64,
            });
        }
        Ok(self.autocorrelation_at(h, s))
    }

    fn autocorrelation_at(&self, h: usize, s: u32) -> usize {
        let order = self.spec.order();
        let modulus = self.spec.modulus();
        let mut count = 0;
        for a in 0..order {
            if a == self.star {
                continue;
            }
            let b = self.spec.add_index(a, h);
            if b == self.star {
                continue;
            }
            if self.values[b] == (self.values[a] + s) % modulus {
                count += 1;
            }
        }
        count
    }

    /// Sweeps every nonzero shift (order * (order-1) - 1 of them).
    pub fn correlation_report(&self) -> CorrelationReport {
        let order = self.spec.order();
        let modulus = self.spec.modulus();
        let peak = self.autocorrelation_at(0, 0);
        let mut max_off_peak = 0usize;
        let mut worst = (0usize, 0u32);
        for h in 0..order {
            for s in 0..modulus {
                if h == 0 && s == 0 {
                    continue;
                }
                let c = self.autocorrelation_at(h, s);
                if c > max_off_peak {
                    max_off_peak = c;
                    worst = (h, s);
                }
            }
        }
        CorrelationReport {
            peak,
            max_off_peak,
            worst_shift: (self.spec.unindex(worst.0).expect("in range"), worst.1),
        }
    }

    /// Canonical serialization; equal arrays produce equal bytes.
    pub fn canonical_string(&self) -> String {
        let mut out = String::new();
        out.push_str("MPCA");
        for f in self.spec.factors() {
            out.push_str(&format!(" {f}"));
        }
        out.push_str(&format!("\nMOD {}\nSTAR", self.modulus()));
        for c in self.star_coords() {
            out.push_str(&format!(" {c}"));
        }
        out.push_str("\nVALUES");
        for (pos, &v) in self.values.iter().enumerate() {
            if pos == self.star {
                out.push_str(" *");
            } else {
                out.push_str(&format!(" {v}"));
            }
        }
        out.push('\n');
        out
    }

    pub fn canonical_bytes(&self) -> Vec<u8> {
        self.canonical_string().into_bytes()
    }

    /// Hex SHA-256 of the canonical bytes; used to name emitted array files.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Parses the canonical text format.
    pub fn parse(input: &str) -> Result<Self> {
        if input.contains('\r') {
            return Err(Error::Parse("CR line endings are not canonical".into()));
        }
        let mut lines = input.lines();
        let mut next_fields = |tag: &str| -> Result<Vec<String>> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {tag} line")))?;
            let mut toks = line.split_whitespace();
            if toks.next() != Some(tag) {
                return Err(Error::Parse(format!("expected {tag} line, got {line:?}")));
            }
            Ok(toks.map(str::to_owned).collect())
        };

        let factors = next_fields("MPCA")?
            .iter()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad factor {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = GroupSpec::new(factors).map_err(|e| Error::Parse(e.to_string()))?;

        let mod_fields = next_fields("MOD")?;
        if mod_fields.len() != 1 || mod_fields[0] != spec.modulus().to_string() {
            return Err(Error::Parse(format!(
                "MOD must be {} for this group",
                spec.modulus()
            )));
        }

        let star_coords = next_fields("STAR")?
            .iter()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad star coordinate {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let star = spec
            .index(&star_coords)
            .map_err(|e| Error::Parse(e.to_string()))?;

        let tokens = next_fields("VALUES")?;
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after VALUES".into()));
        }
        if tokens.len() != spec.order() {
            return Err(Error::Parse(format!(
                "expected {} value tokens, got {}",
                spec.order(),
                tokens.len()
            )));
        }
        let mut values = vec![0u32; spec.order()];
        let mut star_seen = false;
        for (pos, tok) in tokens.iter().enumerate() {
            if tok == "*" {
                if pos != star {
                    return Err(Error::Parse(format!(
                        "star token at position {pos}, STAR line says {star}"
                    )));
                }
                star_seen = true;
            } else {
                let v = tok
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad value token {tok:?}")))?;
                values[pos] = v;
            }
        }
        if !star_seen {
            return Err(Error::Parse("missing * token at the star position".into()));
        }
        Self::new(spec, star, values).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn parse_bytes(input: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(input)
            .map_err(|_| Error::Parse("input is not valid UTF-8".into()))?;
        Self::parse(text)
    }

    /// Pretty-prints a 2D array bottom-up (row index increasing upwards).
    /// Display only; not part of the canonical format.
    pub fn render_2d(&self) -> Result<String> {
        if self.spec.rank() != 2 {
            return Err(Error::InvalidConfig(format!(
                "2D rendering needs a rank-2 group, this one has rank {}",
                self.spec.rank()
            )));
        }
        let [rows, cols] = [self.spec.factors()[0], self.spec.factors()[1]];
        let width = (self.modulus() - 1).to_string().len();
        let mut out = String::new();
        for i in (0..rows).rev() {
            let mut line = Vec::with_capacity(cols as usize);
            for j in 0..cols {
                let pos = self.spec.index(&[i, j]).expect("in range");
                match self.value_at(pos) {
                    Some(v) => line.push(format!("{v:>width$}")),
                    None => line.push(format!("{:>width$}", "*")),
                }
            }
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::welch;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    /// Literal transcription of the distinct difference property: two nested
    /// position loops per shift. Reference oracle for `verify`.
    fn naive_verify(arr: &PeriodicArray) -> bool {
        let spec = arr.spec();
        let m = arr.modulus();
        for h in 1..spec.order() {
            for a in 0..spec.order() {
                for b in 0..a {
                    let (ah, bh) = (spec.add_index(a, h), spec.add_index(b, h));
                    let f = |p: usize| arr.value_at(p);
                    if let (Some(fa), Some(fah), Some(fb), Some(fbh)) =
                        (f(a), f(ah), f(b), f(bh))
                    {
                        if (fah + m - fa) % m == (fbh + m - fb) % m {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn random_array(spec: &GroupSpec, rng: &mut impl Rng) -> PeriodicArray {
        let star = rng.gen_range(0..spec.order());
        let mut vals: Vec<u32> = (0..spec.modulus()).collect();
        vals.shuffle(rng);
        let mut values = vec![0u32; spec.order()];
        let mut it = vals.into_iter();
        for pos in 0..spec.order() {
            if pos != star {
                values[pos] = it.next().unwrap();
            }
        }
        PeriodicArray::new(spec.clone(), star, values).unwrap()
    }

    #[test]
    fn reference_array_verifies() {
        let w = welch::reference_array_gf25();
        assert!(w.verify());
        assert!(naive_verify(&w));
    }

    #[test]
    fn swapping_two_values_breaks_the_property() {
        let w = welch::reference_array_gf25();
        let spec = w.spec().clone();
        let (p1, p2) = (spec.index(&[1, 0]).unwrap(), spec.index(&[1, 1]).unwrap());
        let mut values = w.raw_values().to_vec();
        values.swap(p1, p2);
        let swapped = PeriodicArray::new(spec, w.star_index(), values).unwrap();
        assert!(!swapped.verify());
        assert!(!naive_verify(&swapped));
    }

    #[test]
    fn tiny_gf4_array_verifies() {
        // f(0,1)=0, f(1,0)=1, f(1,1)=2 over (Z_2)^2
        let spec = GroupSpec::elementary(2, 2).unwrap();
        let arr = PeriodicArray::new(spec, 0, vec![0, 0, 1, 2]).unwrap();
        assert!(arr.verify());
        assert!(naive_verify(&arr));
    }

    #[test]
    fn verify_agrees_with_naive_reference() {
        let spec = GroupSpec::elementary(3, 2).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x6d70_6361);
        for _ in 0..1000 {
            let arr = random_array(&spec, &mut rng);
            assert_eq!(arr.verify(), naive_verify(&arr));
        }
    }

    #[test]
    fn autocorrelation_trivial_shifts() {
        let w = welch::reference_array_gf25();
        assert_eq!(w.autocorrelation(&[0, 0], 0).unwrap(), 24);
        for s in 1..24 {
            assert_eq!(w.autocorrelation(&[0, 0], s).unwrap(), 0);
        }
        assert!(w.autocorrelation(&[0, 0], 24).is_err());
        assert!(w.autocorrelation(&[5, 0], 0).is_err());
    }

    #[test]
    fn reference_correlation_is_one() {
        let w = welch::reference_array_gf25();
        let report = w.correlation_report();
        assert_eq!(report.peak, 24);
        assert_eq!(report.max_off_peak, 1);
        for h in 1..w.spec().order() {
            for s in 0..24 {
                assert!(w.autocorrelation(&w.spec().unindex(h).unwrap(), s).unwrap() <= 1);
            }
        }
    }

    #[test]
    fn verify_iff_max_off_peak_at_most_one() {
        // the correlation sweep is the independent oracle for the verifier
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for spec in crate::grid::all_specs_up_to(16) {
            for _ in 0..25 {
                let arr = random_array(&spec, &mut rng);
                let report = arr.correlation_report();
                assert_eq!(arr.verify(), report.max_off_peak <= 1, "{spec}");
            }
        }
        // and on an array known to satisfy the property
        let w = welch::reference_array_gf25();
        assert!(w.verify() && w.correlation_report().max_off_peak <= 1);
    }

    #[test]
    fn canonical_roundtrip_is_identity() {
        let w = welch::reference_array_gf25();
        let bytes = w.canonical_bytes();
        let reparsed = PeriodicArray::parse_bytes(&bytes).unwrap();
        assert_eq!(reparsed, w);
        assert_eq!(reparsed.canonical_bytes(), bytes);
    }

    #[test]
    fn distinct_arrays_have_distinct_bytes() {
        let spec = GroupSpec::elementary(2, 2).unwrap();
        let a = PeriodicArray::new(spec.clone(), 0, vec![0, 0, 1, 2]).unwrap();
        let b = PeriodicArray::new(spec, 0, vec![0, 0, 2, 1]).unwrap();
        assert_ne!(a.canonical_bytes(), b.canonical_bytes());
        assert_ne!(a.content_hash(), b.content_hash());
    }

    #[test]
    fn parse_rejects_malformed_input() {
        let w = welch::reference_array_gf25();
        let good = w.canonical_string();
        // out-of-range value under MOD 24 (the VALUES line ends with 10)
        assert!(PeriodicArray::parse(&good.replace(" 10\n", " 24\n")).is_err());
        // duplicate value
        assert!(PeriodicArray::parse(&good.replace(" 10\n", " 6\n")).is_err());
        // missing star token
        assert!(PeriodicArray::parse(&good.replace("VALUES *", "VALUES 7")).is_err());
        // header mismatches
        assert!(PeriodicArray::parse(&good.replace("MOD 24", "MOD 23")).is_err());
        assert!(PeriodicArray::parse(&good.replace("MPCA 5 5", "MPCA 5")).is_err());
        assert!(PeriodicArray::parse(&good.replace("STAR 0 0", "STAR 0 9")).is_err());
        assert!(PeriodicArray::parse(&good.replace("STAR 0 0", "STAR 0 1")).is_err());
        assert!(PeriodicArray::parse(&good.replace('\n', "\r\n")).is_err());
        assert!(PeriodicArray::parse(&format!("{good}\nextra")).is_err());
        assert!(PeriodicArray::parse("").is_err());
    }

    #[test]
    fn parse_accepts_all_star_positions() {
        let spec = GroupSpec::new(vec![2, 3]).unwrap();
        for star in 0..spec.order() {
            let mut values = vec![0u32; spec.order()];
            let mut v = 0;
            for pos in 0..spec.order() {
                if pos != star {
                    values[pos] = v;
                    v += 1;
                }
            }
            let arr = PeriodicArray::new(spec.clone(), star, values).unwrap();
            let reparsed = PeriodicArray::parse(&arr.canonical_string()).unwrap();
            assert_eq!(reparsed, arr);
        }
    }

    #[test]
    fn constructor_rejects_bad_assignments() {
        let spec = GroupSpec::elementary(2, 2).unwrap();
        assert!(PeriodicArray::new(spec.clone(), 0, vec![0, 0, 1, 1]).is_err());
        assert!(PeriodicArray::new(spec.clone(), 0, vec![0, 0, 1, 3]).is_err());
        assert!(PeriodicArray::new(spec.clone(), 4, vec![0, 0, 1, 2]).is_err());
        assert!(PeriodicArray::new(spec, 0, vec![0, 1, 2]).is_err());
    }

    #[test]
    fn renders_2d_bottom_up() {
        let w = welch::reference_array_gf25();
        let expected = concat!(
            " 1 17 14 15 10\n",
            " 7 21 23 16 20\n",
            "19  8  4 11  9\n",
            "13 22  3  2  5\n",
            " *  0  6 18 12\n",
        );
        assert_eq!(w.render_2d().unwrap(), expected);
        let g222 = GroupSpec::elementary(2, 3).unwrap();
        let arr = PeriodicArray::new(g222, 0, vec![0, 1, 2, 3, 4, 5, 6, 0]).unwrap();
        assert!(arr.render_2d().is_err());
    }
}
