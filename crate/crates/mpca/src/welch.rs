//! The generalized Welch construction: place value i at the grid coordinates
//! of beta^i, i.e. arrange the discrete logarithm over GF(p^m).

use crate::array::PeriodicArray;
use crate::arith::gcd;
use crate::error::Result;
use crate::field::{find_primitive_polys, FieldSpec, FieldTable};
use crate::grid::GroupSpec;

/// Builds the generic Welch array for a field table: star at the group zero
/// and f(x) = log_beta(x) for every nonzero grid point x.
pub fn construct_welch(table: &FieldTable) -> Result<PeriodicArray> {
    let spec = GroupSpec::elementary(table.spec().p(), table.spec().degree())?;
    let mut values = vec![0u32; spec.order()];
    for i in 0..table.spec().unit_order() {
        values[table.exp_index(i)] = i as u32;
    }
    PeriodicArray::new(spec, 0, values)
}

/// A published 5x5 reference array over Z_5 x Z_5 (rows stored bottom-up,
/// i.e. `ROWS[i]` is grid row i).
const REFERENCE_ROWS_GF25: [[u32; 5]; 5] = [
    [0, 0, 6, 18, 12], // row 0; the leading slot is the star
    [13, 22, 3, 2, 5],
    [19, 8, 4, 11, 9],
    [7, 21, 23, 16, 20],
    [1, 17, 14, 15, 10],
];

/// The reference Welch array over Z_5 x Z_5 with the star at the origin.
pub fn reference_array_gf25() -> PeriodicArray {
    let spec = GroupSpec::elementary(5, 2).expect("valid group");
    let mut values = vec![0u32; 25];
    for (i, row) in REFERENCE_ROWS_GF25.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            values[spec.index(&[i as u32, j as u32]).expect("in range")] = v;
        }
    }
    PeriodicArray::new(spec, 0, values).expect("reference array is well formed")
}

/// Searches every primitive polynomial of GF(25) and every unit log-base
/// exponent for combinations whose Welch array reproduces
/// [`reference_array_gf25`] byte for byte.
pub fn find_reference_parameters() -> Result<Vec<(FieldSpec, u64, PeriodicArray)>> {
    let target = reference_array_gf25().canonical_bytes();
    let mut matches = Vec::new();
    for modulus in find_primitive_polys(5, 2)? {
        let spec = FieldSpec::new(5, 2, modulus)?;
        let n = spec.unit_order();
        for e in 1..n {
            if gcd(e, n) != 1 {
                continue;
            }
            let table = FieldTable::build(spec.clone(), e)?;
            let arr = construct_welch(&table)?;
            if arr.canonical_bytes() == target {
                matches.push((spec.clone(), e, arr));
            }
        }
    }
    Ok(matches)
}
