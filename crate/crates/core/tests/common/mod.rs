#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use soag_core::code::{build_code, CodeSweep};
use soag_core::curve::cache::PointCache;
use soag_core::curve::{make_descriptor, CurveInstance};
use soag_core::field::{Elem, Gf};
use soag_core::linalg::Matrix;
use soag_core::poly::Poly;
use soag_core::quantum::{theorem_table, write_csv};
use soag_core::rr::DivisorSpec;
use soag_core::swiss::{build_swiss_data, SwissData};

type Key = (&'static str, u64, Option<u32>);

/// Instances are built once per test binary and shared between threads.
pub fn instance(family: &'static str, q: u64, n: Option<u32>) -> &'static CurveInstance {
    static CELLS: OnceLock<Mutex<HashMap<Key, &'static OnceLock<CurveInstance>>>> = OnceLock::new();
    let cell = *CELLS
        .get_or_init(Default::default)
        .lock()
        .unwrap()
        .entry((family, q, n))
        .or_insert_with(|| Box::leak(Box::new(OnceLock::new())));
    cell.get_or_init(|| CurveInstance::build(make_descriptor(family, q, n).unwrap()).unwrap())
}

pub fn swiss(family: &'static str, q: u64, n: Option<u32>) -> &'static SwissData {
    static CELLS: OnceLock<Mutex<HashMap<Key, &'static OnceLock<SwissData>>>> = OnceLock::new();
    let cell = *CELLS
        .get_or_init(Default::default)
        .lock()
        .unwrap()
        .entry((family, q, n))
        .or_insert_with(|| Box::leak(Box::new(OnceLock::new())));
    cell.get_or_init(|| build_swiss_data(instance(family, q, n)).unwrap())
}

/// Polynomial from `(exponent, encoding)` pairs.
pub fn poly(f: &Gf, terms: &[(usize, Elem)]) -> Poly {
    Poly::from_terms(f, terms)
}

// ---- oracles ----------------------------------------------------------

/// Rank by textbook elimination on a copy, using only scalar field ops.
pub fn rank_oracle(f: &Gf, m: &Matrix) -> usize {
    let mut rows: Vec<Vec<Elem>> = m.rows().map(<[Elem]>::to_vec).collect();
    let cols = m.ncols();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(rank, p);
        let inv = f.inv(rows[rank][c]).unwrap();
        for i in rank + 1..rows.len() {
            if rows[i][c] != 0 {
                let factor = f.mul(rows[i][c], inv);
                let (top, rest) = rows.split_at_mut(i);
                for (x, &p) in rest[0][c..cols].iter_mut().zip(&top[rank][c..cols]) {
                    *x = f.sub(*x, f.mul(factor, p));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `G G^T = 0` by a plain double loop of scalar products.
pub fn gram_is_zero_oracle(f: &Gf, m: &Matrix) -> bool {
    for i in 0..m.nrows() {
        for j in 0..=i {
            let mut acc = 0;
            for (a, b) in m.row(i).iter().zip(m.row(j)) {
                acc = f.add(acc, f.mul(*a, *b));
            }
            if acc != 0 {
                return false;
            }
        }
    }
    true
}

/// Elements of the numerical semigroup generated by `gens` up to `bound`.
pub fn semigroup_upto(gens: &[u64], bound: u64) -> Vec<u64> {
    let mut reach = vec![false; bound as usize + 1];
    reach[0] = true;
    for v in 1..=bound as usize {
        reach[v] = gens.iter().any(|&g| g as usize <= v && reach[v - g as usize]);
    }
    (0..=bound).filter(|&v| reach[v as usize]).collect()
}

// ---- property routines -----------------------------------------------

pub const FIELD_LAW_TRIPLES: usize = 10_000;
pub const PROPERTY_SEED: u64 = 20_240_611;

/// Ring axioms, inverses and Frobenius on seeded random triples.
/// Returns the first violated law, if any.
pub fn field_laws(f: &Gf, triples: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = f.size();
    for _ in 0..triples {
        let (a, b, c) = (rng.gen_range(0..size), rng.gen_range(0..size), rng.gen_range(0..size));
        let checks = [
            ("add assoc", f.add(f.add(a, b), c) == f.add(a, f.add(b, c))),
            ("mul assoc", f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))),
            ("add comm", f.add(a, b) == f.add(b, a)),
            ("mul comm", f.mul(a, b) == f.mul(b, a)),
            ("distributive", f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))),
            ("additive inverse", f.add(a, f.neg(a)) == 0),
            ("sub", f.add(f.sub(a, b), b) == a),
            ("identities", f.add(a, 0) == a && f.mul(a, 1) == a),
            ("multiplicative inverse", a == 0 || f.mul(a, f.inv(a).unwrap()) == 1),
            ("frobenius", f.pow(a, size as u128) == a),
            ("encoding", f.element(a as u64).ok().map(|e| e.enc()) == Some(a)),
        ];
        if let Some((law, _)) = checks.iter().find(|(_, ok)| !ok) {
            return Err(format!("{law} fails for ({a}, {b}, {c}) in {f:?}"));
        }
    }
    Ok(())
}

/// Random distinct root sets survive `product_from_roots` followed by
/// `roots_in_field`; derivatives obey Leibniz and drop the degree.
pub fn poly_round_trips(f: &Gf, trials: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let count = rng.gen_range(0..=20.min(f.size() as usize));
        let mut roots = BTreeSet::new();
        while roots.len() < count {
            roots.insert(rng.gen_range(0..f.size()));
        }
        let roots: Vec<Elem> = roots.into_iter().collect();
        let p = Poly::product_from_roots(f, &roots).map_err(|e| e.to_string())?;
        if p.degree() != Some(roots.len()) || p.leading() != 1 {
            return Err(format!("product of {} roots has degree {:?}", roots.len(), p.degree()));
        }
        if p.roots_in_field(f).map_err(|e| e.to_string())? != roots {
            return Err(format!("root set {roots:?} not recovered"));
        }
        let rand_poly = |rng: &mut ChaCha8Rng| {
            let len = rng.gen_range(1..12);
            Poly::new((0..len).map(|_| rng.gen_range(0..f.size())).collect())
        };
        let (a, b) = (rand_poly(&mut rng), rand_poly(&mut rng));
        let lhs = a.mul(f, &b).derivative(f);
        let rhs = a.derivative(f).mul(f, &b).add(f, &a.mul(f, &b.derivative(f)));
        if lhs != rhs {
            return Err(format!("Leibniz fails for {a} and {b}"));
        }
        if a.add(f, &b).derivative(f) != a.derivative(f).add(f, &b.derivative(f)) {
            return Err("derivative is not additive".into());
        }
        if let (Some(da), Some(dd)) = (a.degree(), a.derivative(f).degree()) {
            if dd >= da {
                return Err(format!("deg {a}' = {dd} not below {da}"));
            }
        }
    }
    Ok(())
}

/// `C_s` inside `C_{s+1}` for consecutive `s` in `range`, checked by row
/// space containment of independently built codes.
pub fn nesting(swiss: &SwissData, range: std::ops::RangeInclusive<u64>) -> Result<(), String> {
    let desc = &swiss.descriptor;
    let sweep = CodeSweep::new(swiss, *range.end()).map_err(|e| e.to_string())?;
    for s in *range.start()..*range.end() {
        let small = build_code(swiss, &DivisorSpec::at_infinity(desc, s)).map_err(|e| e.to_string())?;
        let large = sweep.code_at(s + 1);
        if !small.is_subcode_of(&large) {
            return Err(format!("{}: C_{s} not inside C_{}", desc.label(), s + 1));
        }
        if sweep.code_at(s).generator != small.generator {
            return Err(format!("{}: sweep prefix differs from direct build at s = {s}", desc.label()));
        }
    }
    Ok(())
}

/// `rank G + rank G^perp = N` and the two row spaces are orthogonal.
pub fn rank_nullity(swiss: &SwissData, s: u64) -> Result<(), String> {
    let code = build_code(swiss, &DivisorSpec::at_infinity(&swiss.descriptor, s)).map_err(|e| e.to_string())?;
    let f = &code.field;
    let dual = code.dual_code();
    let (r, rd) = (rank_oracle(f, &code.generator), rank_oracle(f, &dual));
    if r + rd != code.length() {
        return Err(format!("s = {s}: {r} + {rd} != {}", code.length()));
    }
    if !dual.orthogonal_to(f, &code.generator) {
        return Err(format!("s = {s}: dual rows not orthogonal to the code"));
    }
    Ok(())
}

// ---- golden outputs ---------------------------------------------------

pub const BLESS_ENV: &str = "SOAG_BLESS_GOLDEN";

/// Every artifact covered by golden files, generated from scratch.
pub fn golden_outputs() -> Vec<(&'static str, Vec<u8>)> {
    let mut out = Vec::new();

    let dir = tempfile::tempdir().unwrap();
    let cache = PointCache::new(dir.path());
    let desc = make_descriptor("abq", 2, Some(3)).unwrap();
    let (inst, _) = cache.instance(desc.clone()).unwrap();
    out.push(("abq-q2-n3.points", std::fs::read(cache.path_for(&desc)).unwrap()));

    let gk = build_swiss_data(&CurveInstance::build(make_descriptor("gk", 2, None).unwrap()).unwrap()).unwrap();
    out.push(("gk-q2-swiss.json", serde_json::to_vec_pretty(&gk.report()).unwrap()));
    let ggk2 = build_swiss_data(&CurveInstance::build(make_descriptor("ggk2", 2, Some(3)).unwrap()).unwrap()).unwrap();
    out.push(("ggk2-q2-n3-swiss.json", serde_json::to_vec_pretty(&ggk2.report()).unwrap()));

    let code = build_code(&gk, &DivisorSpec::at_infinity(&gk.descriptor, 19)).unwrap();
    let mut buf = Vec::new();
    code.write_matrix(&mut buf).unwrap();
    out.push(("gk-q2-s19.matrix", buf));

    let abq = build_swiss_data(&inst).unwrap();
    let code = build_code(&abq, &DivisorSpec::at_infinity(&abq.descriptor, 6)).unwrap();
    let mut buf = Vec::new();
    soag_core::code::write_matrix_file(&code.field, &code.dual_code(), &mut buf).unwrap();
    out.push(("abq-q2-n3-s6-dual.matrix", buf));

    let rows = theorem_table(&gk.descriptor, None, true).unwrap();
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    out.push(("gk-q2-table.csv", buf));

    out
}

pub fn golden_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Compares (or with `SOAG_BLESS_GOLDEN=1`, rewrites) the stored files.
pub fn check_golden(outputs: &[(&'static str, Vec<u8>)]) -> Result<(), String> {
    let dir = golden_dir();
    if std::env::var_os(BLESS_ENV).is_some() {
        std::fs::create_dir_all(&dir).unwrap();
        for (name, bytes) in outputs {
            std::fs::write(dir.join(name), bytes).unwrap();
        }
        return Ok(());
    }
    for (name, bytes) in outputs {
        let stored = std::fs::read(dir.join(name)).map_err(|e| format!("{name}: {e}"))?;
        if &stored != bytes {
            return Err(format!("{name} differs from the stored golden file"));
        }
    }
    Ok(())
}
