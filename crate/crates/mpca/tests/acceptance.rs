//! Acceptance suite: one test per criterion, each printing a PASS line and
//! enforcing its runtime budget.

use mpca::compare::characterize;
use mpca::enumerator::{enumerate, enumerate_task, list_tasks, SearchConfig};
use mpca::symmetry::{
    apply_add, apply_linear, apply_mul, apply_op, generator_instances, orbit_closure,
    GeneratorFamily, LinearMap,
};
use mpca::welch::{construct_welch, find_reference_parameters, reference_array_gf25};
use mpca::{Error, FieldSpec, FieldTable, GroupSpec, PeriodicArray};
use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

const ALL_FAMILIES: [GeneratorFamily; 4] = [
    GeneratorFamily::Add,
    GeneratorFamily::Mul,
    GeneratorFamily::G1,
    GeneratorFamily::G2,
];

fn budget(started: Instant, limit: Duration, what: &str) {
    let elapsed = started.elapsed();
    assert!(
        elapsed <= limit,
        "{what} took {elapsed:?}, budget {limit:?}"
    );
}

fn pass(n: u32, what: &str) {
    println!("ACCEPTANCE {n} {what}: PASS");
}

/// 5x5 array over Z_5 x Z_5 from bottom-up rows; slot [0][0] is the star.
fn gf25_array(rows: [[u32; 5]; 5]) -> PeriodicArray {
    let spec = GroupSpec::elementary(5, 2).unwrap();
    let mut values = vec![0u32; 25];
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            values[spec.index(&[i as u32, j as u32]).unwrap()] = v;
        }
    }
    PeriodicArray::new(spec, 0, values).unwrap()
}

fn mpca_bin(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_mpca"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

/// All generic arrays over a group: the anchored enumeration expanded by
/// every additive shift.
fn full_generic_set(spec: &GroupSpec) -> Vec<PeriodicArray> {
    let mut anchored = Vec::new();
    enumerate(&SearchConfig::new(spec.clone()), |a| anchored.push(a)).unwrap();
    let mut out = Vec::new();
    for arr in anchored {
        for s in 0..spec.modulus() {
            out.push(apply_add(&arr, s).unwrap());
        }
    }
    out
}

#[test]
fn criterion_1_reference_reproduction() {
    let started = Instant::now();
    let (stdout, _, code) = mpca_bin(&["construct", "--group", "5,5", "--match-paper"]);
    assert_eq!(code, 0, "match search failed:\n{stdout}");
    assert!(
        stdout.contains("MATCH POLY 3,1 LOGBASE 13"),
        "expected pair missing:\n{stdout}"
    );
    // and the library-level search agrees byte-for-byte
    let matches = find_reference_parameters().unwrap();
    assert!(!matches.is_empty());
    let target = reference_array_gf25().canonical_bytes();
    assert!(matches.iter().all(|(_, _, a)| a.canonical_bytes() == target));
    assert!(matches
        .iter()
        .any(|(spec, e, _)| spec.modulus() == [3, 1] && *e == 13));
    budget(started, Duration::from_secs(1), "reference reproduction");
    pass(1, "reference-array reproduction");
}

#[test]
fn criterion_2_worked_symmetry_matrices() {
    let started = Instant::now();
    let (fspec, e, _) = find_reference_parameters()
        .unwrap()
        .into_iter()
        .find(|(spec, e, _)| spec.modulus() == [3, 1] && *e == 13)
        .expect("known parameters reproduce the reference");
    let w = construct_welch(&FieldTable::build(fspec, e).unwrap()).unwrap();

    let mul23 = gf25_array([
        [0, 0, 18, 6, 12],
        [11, 2, 21, 22, 19],
        [5, 16, 20, 13, 15],
        [17, 3, 1, 8, 4],
        [23, 7, 10, 9, 14],
    ]);
    assert_eq!(apply_mul(&w, 23).unwrap(), mul23, "value multiplication by 23");

    let add4 = gf25_array([
        [0, 4, 10, 22, 16],
        [17, 2, 7, 6, 9],
        [23, 12, 8, 15, 13],
        [11, 1, 3, 20, 0],
        [5, 21, 18, 19, 14],
    ]);
    assert_eq!(apply_add(&w, 4).unwrap(), add4, "value addition of 4");

    let row_scale_2 = gf25_array([
        [0, 0, 6, 18, 12],
        [7, 21, 23, 16, 20],
        [13, 22, 3, 2, 5],
        [1, 17, 14, 15, 10],
        [19, 8, 4, 11, 9],
    ]);
    let d21 = LinearMap::diagonal(5, &[2, 1]).unwrap();
    assert_eq!(apply_linear(&w, &d21).unwrap(), row_scale_2, "diag(2,1)");

    let col_scale_3 = gf25_array([
        [0, 6, 12, 0, 18],
        [13, 3, 5, 22, 2],
        [19, 4, 9, 8, 11],
        [7, 23, 20, 21, 16],
        [1, 14, 10, 17, 15],
    ]);
    let d13 = LinearMap::diagonal(5, &[1, 3]).unwrap();
    assert_eq!(apply_linear(&w, &d13).unwrap(), col_scale_3, "diag(1,3)");

    let both_scales = gf25_array([
        [0, 6, 12, 0, 18],
        [7, 23, 20, 21, 16],
        [13, 3, 5, 22, 2],
        [1, 14, 10, 17, 15],
        [19, 4, 9, 8, 11],
    ]);
    let d23 = LinearMap::diagonal(5, &[2, 3]).unwrap();
    assert_eq!(apply_linear(&w, &d23).unwrap(), both_scales, "diag(2,3)");

    let row_shear_1 = gf25_array([
        [0, 0, 6, 18, 12],
        [5, 13, 22, 3, 2],
        [11, 9, 19, 8, 4],
        [23, 16, 20, 7, 21],
        [17, 14, 15, 10, 1],
    ]);
    let rg2 = LinearMap::from_rows(5, &[vec![1, 0], vec![1, 1]]).unwrap();
    assert_eq!(apply_linear(&w, &rg2).unwrap(), row_shear_1, "row shear x=1");

    let col_shear_2 = gf25_array([
        [0, 21, 3, 15, 9],
        [13, 17, 4, 18, 20],
        [19, 0, 23, 2, 10],
        [7, 22, 14, 11, 12],
        [1, 8, 6, 16, 5],
    ]);
    let cg2 = LinearMap::from_rows(5, &[vec![1, 2], vec![0, 1]]).unwrap();
    assert_eq!(apply_linear(&w, &cg2).unwrap(), col_shear_2, "column shear x=2");

    // the published composite applies the row shear first, then the column
    // shear
    let composed = gf25_array([
        [0, 16, 22, 10, 4],
        [5, 14, 19, 18, 21],
        [11, 0, 20, 3, 1],
        [23, 13, 15, 8, 12],
        [17, 9, 6, 7, 2],
    ]);
    let step = apply_linear(&apply_linear(&w, &rg2).unwrap(), &cg2).unwrap();
    assert_eq!(step, composed, "shear composition");
    // same thing through a single combined matrix
    let combined = cg2.compose(&rg2).unwrap();
    assert_eq!(apply_linear(&w, &combined).unwrap(), composed);

    budget(started, Duration::from_secs(1), "worked matrices");
    pass(2, "symmetry matrices");
}

#[test]
fn criterion_3_costas_preservation() {
    let started = Instant::now();
    for factors in [vec![2u32, 2], vec![3, 3], vec![2, 2, 2]] {
        let spec = GroupSpec::new(factors).unwrap();
        let arrays = full_generic_set(&spec);
        assert!(!arrays.is_empty(), "{spec} has no arrays");
        let mut instances = Vec::new();
        for fam in ALL_FAMILIES {
            instances.extend(generator_instances(&spec, fam).unwrap());
        }
        for arr in &arrays {
            assert!(arr.verify());
            for op in &instances {
                let image = apply_op(arr, op).unwrap();
                assert!(image.verify(), "{spec}: {op:?} broke the property");
            }
        }
    }
    budget(started, Duration::from_secs(30), "preservation sweep");
    pass(3, "Costas preservation under every generator instance");
}

#[test]
fn criterion_4_welch_correlation_bound() {
    let started = Instant::now();
    for (p, m) in [(2u32, 2usize), (3, 2), (2, 3), (5, 2), (7, 2)] {
        let fspec = FieldSpec::default_poly(p, m).unwrap();
        let arr = construct_welch(&FieldTable::build(fspec, 1).unwrap()).unwrap();
        let report = arr.correlation_report();
        let n = (p as usize).pow(m as u32);
        assert_eq!(report.peak, n - 1, "GF({p}^{m}) peak");
        assert!(report.max_off_peak <= 1, "GF({p}^{m}) off-peak");
    }
    budget(started, Duration::from_secs(30), "correlation sweep");
    pass(4, "Welch correlation peak and off-peak bound");
}

#[test]
fn criterion_5_characterization() {
    // desk-scale groups: anchored enumeration equals the anchored closure
    // slice as sets
    let started = Instant::now();
    for factors in [vec![3u32, 3], vec![2, 2, 2]] {
        let spec = GroupSpec::new(factors).unwrap();
        let report = characterize(&spec, 0).unwrap();
        assert!(!report.enumerated.is_empty(), "{spec}");
        assert!(
            report.equal(),
            "{spec}: symmetric difference {}",
            report.symmetric_difference_size()
        );
        budget(started, Duration::from_secs(10), "characterization");
    }
    pass(5, "enumeration equals orbit closure on (Z_3)^2 and (Z_2)^3");
}

#[test]
fn criterion_5_z5_closure_verified_and_idempotent() {
    // (Z_5)^2 is not desk-scale for enumeration; check instead that the
    // closure contains only verifier-passing arrays and is closed
    let started = Instant::now();
    let seed = mpca::compare::default_welch_seed(&GroupSpec::elementary(5, 2).unwrap()).unwrap();
    let closure = orbit_closure(&[seed], &ALL_FAMILIES, false).unwrap();
    assert!(!closure.is_empty());
    assert!(closure.contains(&reference_array_gf25().canonical_bytes()));
    let members: Vec<PeriodicArray> = closure
        .iter()
        .map(|b| PeriodicArray::parse_bytes(b).unwrap())
        .collect();
    for arr in &members {
        assert!(arr.verify());
    }
    let again = orbit_closure(&members, &ALL_FAMILIES, false).unwrap();
    assert_eq!(closure, again, "closure is not a fixed point");
    budget(started, Duration::from_secs(600), "(Z_5)^2 closure");
    pass(5, "(Z_5)^2 closure verifies and is idempotent");
}

#[test]
fn criterion_6_nonexistence() {
    let started = Instant::now();
    let mut count23 = 0u64;
    enumerate(
        &SearchConfig::new(GroupSpec::new(vec![2, 3]).unwrap()),
        |_| count23 += 1,
    )
    .unwrap();
    assert_eq!(count23, 0, "Z_2 x Z_3 admits no arrays");
    budget(started, Duration::from_secs(1), "Z_2 x Z_3 enumeration");

    let started = Instant::now();
    let mut count34 = 0u64;
    enumerate(
        &SearchConfig::new(GroupSpec::new(vec![3, 4]).unwrap()),
        |_| count34 += 1,
    )
    .unwrap();
    assert_eq!(count34, 0, "Z_3 x Z_4 admits no arrays");
    budget(started, Duration::from_secs(120), "Z_3 x Z_4 enumeration");

    // (Z_4)^2 is long-running: gated behind --force but reachable
    let (_, stderr, code) = mpca_bin(&["enumerate", "--group", "4,4", "--count-only"]);
    assert_ne!(code, 0);
    assert!(stderr.contains("--force"), "gate message missing:\n{stderr}");
    pass(6, "nonexistence over non-elementary groups");
}

#[test]
fn criterion_7_oracle_equivalence() {
    let started = Instant::now();
    for factors in [vec![2u32, 2], vec![2, 3]] {
        let spec = GroupSpec::new(factors).unwrap();
        let mut emitted = BTreeSet::new();
        enumerate(&SearchConfig::new(spec.clone()), |a| {
            emitted.insert(a.canonical_bytes());
        })
        .unwrap();

        // brute force: every anchored assignment through the standalone
        // verifier
        let m = spec.modulus();
        let mut brute = BTreeSet::new();
        let rest: Vec<u32> = (1..m).collect();
        let mut perm = rest.clone();
        permute(&mut perm, 0, &mut |p| {
            let mut values = vec![0u32; spec.order()];
            values[2..].copy_from_slice(p);
            let arr = PeriodicArray::new(spec.clone(), 0, values).unwrap();
            if arr.verify() {
                brute.insert(arr.canonical_bytes());
            }
        });
        assert_eq!(emitted, brute, "{spec}");
        if spec.factors() == [2, 2] {
            assert_eq!(emitted.len(), 2);
        } else {
            assert!(emitted.is_empty());
        }
    }
    budget(started, Duration::from_secs(1), "oracle equivalence");
    pass(7, "enumerator agrees with brute-force filtering");
}

/// Heap's permutation algorithm; keeps the test free of extra dependencies.
fn permute(items: &mut [u32], k: usize, visit: &mut impl FnMut(&[u32])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[test]
fn criterion_8_singular_shear_rejection() {
    let err = LinearMap::from_rows(5, &[vec![1, 3], vec![2, 1]]).unwrap_err();
    assert!(matches!(err, Error::SingularMap { p: 5 }));
    assert!(err.to_string().contains("determinant"));
    let g55 = GroupSpec::elementary(5, 2).unwrap();
    let g2 = generator_instances(&g55, GeneratorFamily::G2).unwrap();
    assert_eq!(g2.len(), 20);
    pass(8, "singular shears rejected, 20 shear instances over (Z_5)^2");
}

#[test]
fn criterion_9_parallel_split_exactness() {
    let started = Instant::now();
    let spec = GroupSpec::elementary(3, 2).unwrap();
    let mut full = Vec::new();
    let full_stats = enumerate(&SearchConfig::new(spec.clone()), |a| {
        full.push(a.canonical_bytes())
    })
    .unwrap();
    let full_set: BTreeSet<_> = full.iter().cloned().collect();

    for depth in [1usize, 2] {
        let tasks = list_tasks(&spec, 0, depth).unwrap();
        let mut sum = 0u64;
        let mut merged = BTreeSet::new();
        for t in 0..tasks.len() {
            let cfg = SearchConfig::new(spec.clone())
                .with_split_depth(depth)
                .unwrap()
                .with_task(t);
            let stats = enumerate_task(&cfg, |a| {
                assert!(merged.insert(a.canonical_bytes()), "duplicate emission");
            })
            .unwrap();
            sum += stats.emitted;
        }
        assert_eq!(sum, full_stats.emitted, "depth {depth} counts");
        assert_eq!(merged, full_set, "depth {depth} sets");
    }
    budget(started, Duration::from_secs(5), "split exactness");
    pass(9, "task partition is exact at depths 1 and 2");
}
