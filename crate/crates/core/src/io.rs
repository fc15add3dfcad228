//! On-disk formats: JSON schemas for kernels, parameter fields, and tree
//! fields, plus CSV renderers for tables and reports. Everything here is
//! pure data conversion — callers own the actual file handles.
//!
//! Floating-point values are written with Rust's shortest-roundtrip `f64`
//! formatting; reading them back in rational mode embeds each double as the
//! exact dyadic rational it is. CSV output uses a header row and LF line
//! endings.

use crate::error::Result;
use crate::kernel::{DeterminantTable, MomentKernel};
use crate::poly::PolyTable;
use crate::scalar::{RealField, Scalar};
use crate::schur::GammaField;
use crate::series::NcSeries;
use crate::tree::TreeGammaField;
use crate::triangular::TriangularArray;
use crate::words::Alphabet;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Canonicalizes `-0.0` to `0.0` so mathematically equal values always
/// render identically (conjugation and sign flips otherwise leak `-0`
/// into the output).
fn canonical(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

fn canonical_pair<T: Scalar>(v: &T) -> (f64, f64) {
    let (re, im) = v.to_f64_pair();
    (canonical(re), canonical(im))
}

/// Kernel file: upper entries only, as `[k, j, re, im]` with `k ≤ j`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelFile {
    pub size: usize,
    pub entries: Vec<(usize, usize, f64, f64)>,
}

impl KernelFile {
    pub fn from_kernel<T: Scalar>(kernel: &MomentKernel<T>) -> Self {
        let entries = kernel
            .upper_entries()
            .map(|(k, j, v)| {
                let (re, im) = canonical_pair(v);
                (k, j, re, im)
            })
            .collect();
        KernelFile {
            size: kernel.size(),
            entries,
        }
    }

    pub fn to_kernel<T: Scalar>(&self) -> Result<MomentKernel<T>> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for &(k, j, re, im) in &self.entries {
            entries.push((k, j, scalar_from_pair::<T>(re, im)?));
        }
        MomentKernel::from_entries(self.size, entries)
    }
}

/// Parameter-field file: row diagonal plus strict-upper `γ` entries as
/// `[k, j, re, im]`; absent pairs mean `γ = 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GammaFile {
    pub diag: Vec<f64>,
    pub gamma: Vec<(usize, usize, f64, f64)>,
}

impl GammaFile {
    pub fn from_field<T: Scalar>(field: &GammaField<T>) -> Self {
        let diag = field_diag_f64(field);
        let gamma = field
            .gamma_entries()
            .filter(|(_, _, v)| **v != T::zero())
            .map(|(k, j, v)| {
                let (re, im) = canonical_pair(v);
                (k, j, re, im)
            })
            .collect();
        GammaFile { diag, gamma }
    }

    pub fn to_field<T: Scalar>(&self) -> Result<GammaField<T>> {
        let mut diag = Vec::with_capacity(self.diag.len());
        for &v in &self.diag {
            diag.push(T::Real::from_f64_exact(v)?);
        }
        let mut entries = Vec::with_capacity(self.gamma.len());
        for &(k, j, re, im) in &self.gamma {
            entries.push((k, j, scalar_from_pair::<T>(re, im)?));
        }
        GammaField::from_entries(diag, entries)
    }
}

fn field_diag_f64<T: Scalar>(field: &GammaField<T>) -> Vec<f64> {
    (0..field.size()).map(|k| field.diag(k).to_f64()).collect()
}

/// Tree-field file: alphabet size and one `["word", re, im]` per stored
/// parameter; words are digit strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeFile {
    #[serde(rename = "N")]
    pub n: usize,
    pub gamma: Vec<(String, f64, f64)>,
}

impl TreeFile {
    pub fn from_tree<T: Scalar>(tree: &TreeGammaField<T>) -> Self {
        let gamma = tree
            .params()
            .map(|(w, v)| {
                let (re, im) = canonical_pair(v);
                (w.to_string(), re, im)
            })
            .collect();
        TreeFile {
            n: tree.n(),
            gamma,
        }
    }

    pub fn to_tree<T: Scalar>(&self) -> Result<TreeGammaField<T>> {
        let alphabet = Alphabet::new(self.n)?;
        let mut entries = Vec::with_capacity(self.gamma.len());
        for (text, re, im) in &self.gamma {
            entries.push((alphabet.parse(text)?, scalar_from_pair::<T>(*re, *im)?));
        }
        TreeGammaField::new(self.n, entries)
    }
}

fn scalar_from_pair<T: Scalar>(re: f64, im: f64) -> Result<T> {
    T::from_re_im(T::Real::from_f64_exact(re)?, T::Real::from_f64_exact(im)?)
}

/// CSV of polynomial coefficients: `n,l,k,re,im`, one row per coefficient
/// of `φ_n(·, l)`, levels within degree, degrees ascending.
pub fn csv_polys<T: Scalar>(table: &PolyTable<T>) -> String {
    let mut out = String::from("n,l,k,re,im\n");
    for n in 0..=table.max_degree() {
        for l in 0..table.level_capacity(n) {
            for (k, c) in table.phi(n, l).iter().enumerate() {
                let (re, im) = canonical_pair(c);
                let _ = writeln!(out, "{n},{l},{k},{re},{im}");
            }
        }
    }
    out
}

/// CSV of a lower triangular array: `k,j,re,im` over `k ≥ j`, row-major.
pub fn csv_array<T: Scalar>(arr: &TriangularArray<T>) -> String {
    let mut out = String::from("k,j,re,im\n");
    for (k, j, v) in arr.entries() {
        let (re, im) = canonical_pair(v);
        let _ = writeln!(out, "{k},{j},{re},{im}");
    }
    out
}

/// CSV of section determinants: `r,q,value`.
pub fn csv_dets<R: RealField>(table: &DeterminantTable<R>) -> String {
    let mut out = String::from("r,q,value\n");
    for (r, q, v) in table.entries() {
        let _ = writeln!(out, "{r},{q},{}", canonical(v.to_f64()));
    }
    out
}

/// CSV of a non-commutative series: `word,re,im` in graded word order; the
/// empty word prints as `e`.
pub fn csv_series<T: Scalar>(series: &NcSeries<T>) -> String {
    let mut out = String::from("word,re,im\n");
    for (w, c) in series.terms() {
        let (re, im) = canonical_pair(c);
        let _ = writeln!(out, "{w},{re},{im}");
    }
    out
}

/// One row of the limits CSV.
#[derive(Debug, Clone, Serialize)]
pub struct LimitCsvRow {
    pub kind: &'static str,
    pub r: usize,
    pub n_or_q: usize,
    pub value: f64,
    pub estimate: f64,
    pub residual: f64,
}

/// CSV of limit sequences: `kind,r,n_or_q,value,estimate,residual`.
pub fn csv_limits(rows: &[LimitCsvRow]) -> String {
    let mut out = String::from("kind,r,n_or_q,value,estimate,residual\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.kind,
            row.r,
            row.n_or_q,
            canonical(row.value),
            canonical(row.estimate),
            canonical(row.residual)
        );
    }
    out
}
