//! Evaluation codes `C(D, G)`, their duals, self-orthogonality and weights.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{build_field, Elem, Gf};
use crate::linalg::Matrix;
use crate::rr::{select_basis, Basis, DivisorSpec, Evaluator, MonomialFn};
use crate::swiss::SwissData;

/// Where an evaluation code came from.
#[derive(Clone, Debug)]
pub struct CodeSource {
    pub divisor: DivisorSpec,
    pub genus: u64,
    pub monomials: Vec<MonomialFn>,
}

#[derive(Clone, Debug)]
pub struct EvaluationCode {
    pub field: Gf,
    pub generator: Matrix,
    /// `None` for codes read from a matrix file.
    pub source: Option<CodeSource>,
}

impl EvaluationCode {
    pub fn from_generator(field: Gf, generator: Matrix) -> Self {
        Self { field, generator, source: None }
    }

    pub fn length(&self) -> usize {
        self.generator.ncols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.nrows()
    }

    /// `N - deg G`
    pub fn designed_distance(&self) -> Option<i64> {
        self.source.as_ref().map(|s| self.length() as i64 - s.divisor.degree() as i64)
    }

    /// `deg G - 2g + 2`
    pub fn designed_dual_distance(&self) -> Option<i64> {
        self.source.as_ref().map(|s| s.divisor.degree() as i64 - 2 * s.genus as i64 + 2)
    }

    /// Every pair of generator rows, a row with itself included, has zero
    /// Euclidean inner product.
    pub fn is_self_orthogonal(&self) -> bool {
        self.generator.orthogonal_prefix(&self.field) == self.dimension()
    }

    /// Basis of the Euclidean dual, `(N - k) x N`.
    pub fn dual_code(&self) -> Matrix {
        self.generator.nullspace(&self.field)
    }

    /// Whether this code's row space lies inside `other`'s.
    pub fn is_subcode_of(&self, other: &EvaluationCode) -> bool {
        self.field == other.field && other.generator.row_space_contains(&self.field, &self.generator)
    }

    pub fn write_matrix<W: Write>(&self, out: W) -> Result<()> {
        write_matrix_file(&self.field, &self.generator, out)
    }
}

fn from_basis(swiss: &SwissData, g: DivisorSpec, basis: &Basis, k: usize) -> EvaluationCode {
    EvaluationCode {
        field: swiss.field.clone(),
        generator: basis.evaluations.prefix(k),
        source: Some(CodeSource { divisor: g, genus: swiss.descriptor.genus, monomials: basis.monomials[..k].to_vec() }),
    }
}

/// Evaluates a basis of `L(G)` at the places of `D`.
pub fn build_code(swiss: &SwissData, g: &DivisorSpec) -> Result<EvaluationCode> {
    let basis = select_basis(&swiss.descriptor, g, &swiss.field, &swiss.d_places)?;
    let rank = basis.evaluations.rank(&swiss.field);
    if rank != basis.dimension() {
        return Err(Error::Inconsistent {
            what: format!("{} s = {}: generator rank", swiss.descriptor.label(), g.s),
            computed: rank.to_string(),
            expected: basis.dimension().to_string(),
        });
    }
    Ok(from_basis(swiss, *g, &basis, basis.dimension()))
}

/// Codes `C(D, s P)` for every `s` up to a top value, sharing one basis.
///
/// Greedy selection in canonical order makes the basis for `s` the prefix of
/// the top basis with pole order at most `s`, so the codes are nested.
pub struct CodeSweep<'a> {
    pub swiss: &'a SwissData,
    pub top: u64,
    basis: Basis,
    orthogonal_rows: usize,
}

impl<'a> CodeSweep<'a> {
    pub fn new(swiss: &'a SwissData, top: u64) -> Result<Self> {
        let g = DivisorSpec::at_infinity(&swiss.descriptor, top);
        let basis = select_basis(&swiss.descriptor, &g, &swiss.field, &swiss.d_places)?;
        let orthogonal_rows = basis.evaluations.orthogonal_prefix(&swiss.field);
        Ok(Self { swiss, top, basis, orthogonal_rows })
    }

    pub fn dimension_at(&self, s: u64) -> usize {
        assert!(s <= self.top, "s = {s} above sweep top {}", self.top);
        self.basis.dimension_at(s)
    }

    pub fn code_at(&self, s: u64) -> EvaluationCode {
        let g = DivisorSpec::at_infinity(&self.swiss.descriptor, s);
        from_basis(self.swiss, g, &self.basis, self.dimension_at(s))
    }

    /// Riemann-Roch dimension check at `s` (only binding above `2g - 2`).
    pub fn check_contract(&self, s: u64) -> Result<()> {
        let desc = &self.swiss.descriptor;
        let deg = DivisorSpec::at_infinity(desc, s).degree();
        if deg as i64 > desc.canonical_degree() {
            let required = (deg + 1 - desc.genus) as usize;
            let achieved = self.dimension_at(s);
            if achieved != required {
                return Err(Error::DimensionShortfall { achieved, required });
            }
        }
        Ok(())
    }

    /// `G G^T = 0` for the code at `s`.
    pub fn is_self_orthogonal_at(&self, s: u64) -> bool {
        self.dimension_at(s) <= self.orthogonal_rows
    }

    /// Largest `s <= top` whose code is self-orthogonal.
    pub fn observed_boundary(&self) -> Option<u64> {
        (0..=self.top).rev().find(|&s| self.is_self_orthogonal_at(s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub s: u64,
    pub witnesses: usize,
    pub orthogonal: bool,
    pub rank: usize,
    pub expected_rank: usize,
    pub passed: bool,
}

/// Checks the dual description `C(D,G)^perp = C(D, M + (c - s)P)` on a
/// one-point curve: for every monomial `w` with pole order at most
/// `deg M + c - s`, the vector `(w / f'(z))(P)` over `D` is orthogonal to the
/// code, and these vectors span a space of dimension `N - k`.
pub fn dual_membership_witnesses(swiss: &SwissData, g: &DivisorSpec) -> Result<WitnessReport> {
    let desc = &swiss.descriptor;
    if desc.infinite.count != 1 {
        return Err(Error::Precondition(format!("{} is not a one-point curve", desc.label())));
    }
    let code = build_code(swiss, g)?;
    let bound = swiss.deg_m as i64 + swiss.omega_coeff[0] - g.s as i64;
    if bound < 0 {
        return Err(Error::Precondition(format!("s = {} leaves no witnesses", g.s)));
    }
    let witnesses = crate::rr::candidate_monomials(desc, &DivisorSpec::at_infinity(desc, bound as u64));
    let rows = witness_rows(swiss, &witnesses)?;
    let orthogonal = rows.orthogonal_to(&swiss.field, &code.generator);
    let rank = rows.rank(&swiss.field);
    let expected_rank = code.length() - code.dimension();
    Ok(WitnessReport {
        s: g.s,
        witnesses: witnesses.len(),
        orthogonal,
        rank,
        expected_rank,
        passed: orthogonal && rank == expected_rank,
    })
}

/// Evaluation vectors of `w / f'(z)` at the places of `D`.
pub fn witness_rows(swiss: &SwissData, monomials: &[MonomialFn]) -> Result<Matrix> {
    let f = &swiss.field;
    let fib = swiss.descriptor.fibering;
    let inv_fp: Vec<Elem> = swiss
        .d_places
        .iter()
        .map(|p| f.inv(swiss.f_prime.eval(f, p.coord(fib))))
        .collect::<Result<_>>()?;
    let ev = Evaluator::new(f, &swiss.d_places);
    let rows: Vec<Vec<Elem>> = monomials
        .par_iter()
        .map(|m| ev.eval(m).iter().zip(&inv_fp).map(|(&a, &b)| f.mul(a, b)).collect())
        .collect();
    Ok(Matrix::from_rows(rows, swiss.d_places.len()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinWeightMode {
    Exact,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightCertificate {
    Exact,
    SampledUpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MinWeight {
    pub weight: usize,
    pub certificate: WeightCertificate,
    pub codewords: u64,
}

pub const EXACT_ENUMERATION_CAP: f64 = (1u64 << 24) as f64;
pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0x5eed;

fn weight(v: &[Elem]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

pub fn min_weight(code: &EvaluationCode, mode: MinWeightMode) -> Result<MinWeight> {
    let k = code.dimension();
    if k == 0 {
        return Err(Error::Precondition("the zero code has no nonzero codewords".into()));
    }
    let result = match mode {
        MinWeightMode::Exact => {
            let words = (code.field.size() as f64).powi(k as i32);
            if words > EXACT_ENUMERATION_CAP {
                return Err(Error::EnumerationCap { words });
            }
            exact_min_weight(code)
        }
        MinWeightMode::Sampled { samples, seed } => sampled_min_weight(code, samples, seed),
    };
    if result.certificate == WeightCertificate::Exact {
        if let Some(d) = code.designed_distance() {
            if d > 0 && (result.weight as i64) < d {
                return Err(Error::Inconsistent {
                    what: "minimum weight".into(),
                    computed: result.weight.to_string(),
                    expected: format!("at least the designed distance {d}"),
                });
            }
        }
    }
    Ok(result)
}

/// Scans one codeword per projective point: the first nonzero message
/// coefficient is fixed to 1 and the rest run through an odometer, so each
/// step changes the codeword by a multiple of a single row.
fn exact_min_weight(code: &EvaluationCode) -> MinWeight {
    let f = &code.field;
    let g = &code.generator;
    let (k, q) = (g.nrows(), f.size());
    // jobs: (lead row, value of the next row or None)
    let jobs: Vec<(usize, Option<Elem>)> = (0..k)
        .flat_map(|lead| {
            if lead + 1 < k {
                (0..q).map(|v| (lead, Some(v))).collect::<Vec<_>>()
            } else {
                vec![(lead, None)]
            }
        })
        .collect();
    let (best, count) = jobs
        .par_iter()
        .map(|&(lead, next)| {
            let mut word = g.row(lead).to_vec();
            let mut free_from = lead + 1;
            if let Some(v) = next {
                f.axpy(&mut word, v, g.row(lead + 1));
                free_from = lead + 2;
            }
            let mut digits = vec![0 as Elem; k - free_from];
            let mut best = weight(&word);
            let mut count = 1u64;
            'outer: loop {
                let mut i = 0;
                loop {
                    if i == digits.len() {
                        break 'outer;
                    }
                    let old = digits[i];
                    let new = if old + 1 == q { 0 } else { old + 1 };
                    digits[i] = new;
                    f.axpy(&mut word, f.sub(new, old), g.row(free_from + i));
                    if new != 0 {
                        break;
                    }
                    i += 1;
                }
                best = best.min(weight(&word));
                count += 1;
            }
            (best, count)
        })
        .reduce(|| (usize::MAX, 0), |a, b| (a.0.min(b.0), a.1 + b.1));
    MinWeight { weight: best, certificate: WeightCertificate::Exact, codewords: count }
}

fn sampled_min_weight(code: &EvaluationCode, samples: u64, seed: u64) -> MinWeight {
    const BLOCK: u64 = 1024;
    let f = &code.field;
    let g = &code.generator;
    let blocks = samples.div_ceil(BLOCK);
    let best = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let mut best = usize::MAX;
            for _ in 0..BLOCK.min(samples - b * BLOCK) {
                let mut word = vec![0; g.ncols()];
                let mut nonzero = false;
                for i in 0..g.nrows() {
                    let c = rng.gen_range(0..f.size());
                    nonzero |= c != 0;
                    f.axpy(&mut word, c, g.row(i));
                }
                if nonzero {
                    best = best.min(weight(&word));
                }
            }
            best
        })
        .min()
        .unwrap_or(usize::MAX);
    MinWeight { weight: best, certificate: WeightCertificate::SampledUpperBound, codewords: samples }
}

/// Matrix file: `p k_ext N k`, then `k` lines of `N` encodings.
pub fn write_matrix_file<W: Write>(field: &Gf, m: &Matrix, mut out: W) -> Result<()> {
    writeln!(out, "{} {} {} {}", field.p(), field.k(), m.ncols(), m.nrows())?;
    let mut line = String::new();
    for row in m.rows() {
        line.clear();
        for (j, x) in row.iter().enumerate() {
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&x.to_string());
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Reads a matrix file over the default field for its `(p, k_ext)`.
pub fn read_matrix_file<R: BufRead>(input: R) -> Result<EvaluationCode> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::MatrixFormat("empty input".into()))??;
    let h: Vec<u64> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::MatrixFormat(format!("bad header `{header}`"))))
        .collect::<Result<_>>()?;
    let [p, k_ext, n, k] = h[..] else {
        return Err(Error::MatrixFormat(format!("header needs four integers, got `{header}`")));
    };
    let field = build_field(p as u32, k_ext as u32, None)?;
    let mut m = Matrix::empty(n as usize);
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<Elem> = line
            .split_whitespace()
            .map(|t| match t.parse::<Elem>() {
                Ok(x) if field.contains(x) => Ok(x),
                _ => Err(Error::MatrixFormat(format!("row {}: bad entry `{t}`", i + 1))),
            })
            .collect::<Result<_>>()?;
        if row.len() != n as usize {
            return Err(Error::MatrixFormat(format!("row {} has {} entries, expected {n}", i + 1, row.len())));
        }
        m.push_row(&row);
    }
    if m.nrows() != k as usize {
        return Err(Error::MatrixFormat(format!("expected {k} rows, found {}", m.nrows())));
    }
    Ok(EvaluationCode::from_generator(field, m))
}
