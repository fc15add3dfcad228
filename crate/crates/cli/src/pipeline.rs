//! The file-driven pipelines: extract, reconstruct, polys, lattice, factor,
//! limits, and tree. Each reads a JSON input, runs one library pipeline in
//! the selected arithmetic, and emits JSON/CSV artifacts.

use crate::output::{emit, emit_line, json_text, read_json};
use crate::{
    CliError, CliResult, Ctx, ExtractArgs, FactorArgs, LatticeArgs, LimitsArgs, PolysArgs,
    Precision, ReconstructArgs, TreeArgs,
};
use std::fmt::Write as _;
use szegokit::asymptotics::{first_limit, strong_limit};
use szegokit::io::{csv_array, csv_limits, csv_polys, GammaFile, KernelFile, LimitCsvRow, TreeFile};
use szegokit::scalar::{RealField, Scalar};
use szegokit::tree::{prefix_support_deviation, stationarity_deviation};
use szegokit::{
    build_polys, catalan, extract_gamma, extract_gamma_squares, lattice_expand, nc_limits,
    spectral_factor, GammaField, MomentKernel, TreeGammaField, C64, Rat,
};

/// Kernel file -> parameter field file. Under `--precision rational` the
/// parameters are extracted exactly through their signed squares and then
/// rendered in floating point, so the output stays on the common schema.
pub fn extract(ctx: &Ctx, args: &ExtractArgs) -> CliResult {
    let file: KernelFile = read_json(&args.input)?;
    let (out, size) = match ctx.precision {
        Precision::Float64 => {
            let kernel: MomentKernel<C64> = file.to_kernel()?;
            let field = extract_gamma(&kernel)?;
            (GammaFile::from_field(&field), kernel.size())
        }
        Precision::Rational => {
            let kernel: MomentKernel<Rat> = file.to_kernel()?;
            let field = extract_gamma_squares(&kernel)?.to_float_field()?;
            (GammaFile::from_field(&field), kernel.size())
        }
    };
    let params = out.gamma.len();
    ctx.emitter.artifact("gamma.json", &json_text(&out)?)?;
    ctx.emitter.note(&format!(
        "extracted {params} nonzero strict-upper parameters from a size-{size} kernel"
    ));
    Ok(())
}

pub fn reconstruct(ctx: &Ctx, args: &ReconstructArgs) -> CliResult {
    match ctx.precision {
        Precision::Float64 => run_reconstruct::<C64>(ctx, args),
        Precision::Rational => run_reconstruct::<Rat>(ctx, args),
    }
}

fn run_reconstruct<T: Scalar>(ctx: &Ctx, args: &ReconstructArgs) -> CliResult {
    let file: GammaFile = read_json(&args.input)?;
    let field: GammaField<T> = file.to_field()?;
    let m = args.size.unwrap_or(field.size());
    let kernel = field.reconstruct_moments(m)?;
    let out = KernelFile::from_kernel(&kernel);
    ctx.emitter.artifact("kernel.json", &json_text(&out)?)?;
    ctx.emitter.note(&format!(
        "reconstructed a size-{m} kernel from a size-{} parameter field",
        field.size()
    ));
    Ok(())
}

pub fn polys(ctx: &Ctx, args: &PolysArgs) -> CliResult {
    match ctx.precision {
        Precision::Float64 => run_polys::<C64>(ctx, args),
        Precision::Rational => run_polys::<Rat>(ctx, args),
    }
}

fn run_polys<T: Scalar>(ctx: &Ctx, args: &PolysArgs) -> CliResult {
    let file: GammaFile = read_json(&args.input)?;
    let field: GammaField<T> = file.to_field()?;
    let table = build_polys(&field, args.degree, args.levels)?;
    ctx.emitter.artifact("polys.csv", &csv_polys(&table))?;
    ctx.emitter.note(&format!(
        "tabulated orthonormal polynomials up to degree {} at levels 0..={}",
        args.degree, args.levels
    ));
    Ok(())
}

/// Prints the signed expansion of `s_{k,j}/sqrt(s_{k,k} s_{j,j})` — one term
/// per line after a count line — and checks the term count against the
/// Catalan number for the gap.
pub fn lattice(ctx: &Ctx, args: &LatticeArgs) -> CliResult {
    if args.j <= args.k {
        return Err(CliError::Invalid(format!(
            "--j must exceed --k (got k = {}, j = {})",
            args.k, args.j
        )));
    }
    let terms = lattice_expand(args.k, args.j)?;
    let gap = args.j - args.k;
    let expected = catalan(gap);
    emit_line(&format!(
        "s({k},{j}) / sqrt(s({k},{k}) s({j},{j})): {count} terms; catalan({gap}) = {expected}",
        k = args.k,
        j = args.j,
        count = terms.len(),
    ));
    let mut body = String::new();
    for term in &terms {
        let _ = writeln!(body, "{term}");
    }
    emit(&body);
    ctx.emitter.file_only("lattice.txt", &body)?;
    if expected != terms.len().into() {
        return Err(CliError::SelfCheck {
            what: "lattice term count vs Catalan number",
            deviation: f64::NAN,
            tol: 0.0,
        });
    }
    Ok(())
}

pub fn factor(ctx: &Ctx, args: &FactorArgs) -> CliResult {
    match ctx.precision {
        Precision::Float64 => run_factor::<C64>(ctx, args),
        Precision::Rational => run_factor::<Rat>(ctx, args),
    }
}

fn run_factor<T: Scalar>(ctx: &Ctx, args: &FactorArgs) -> CliResult {
    let file: KernelFile = read_json(&args.input)?;
    let kernel: MomentKernel<T> = file.to_kernel()?;
    let m = args.size.unwrap_or(kernel.size());
    let (theta, report) = spectral_factor(&kernel, m)?;
    ctx.emitter.artifact("theta.csv", &csv_array(&theta))?;
    ctx.emitter
        .artifact("stabilization.json", &json_text(&report)?)?;
    ctx.emitter.note(&format!(
        "factored the size-{m} section; half-size deviation {:e}",
        report.max_deviation
    ));
    Ok(())
}

pub fn limits(ctx: &Ctx, args: &LimitsArgs) -> CliResult {
    match ctx.precision {
        Precision::Float64 => run_limits::<C64>(ctx, args),
        Precision::Rational => run_limits::<Rat>(ctx, args),
    }
}

fn run_limits<T: Scalar>(ctx: &Ctx, args: &LimitsArgs) -> CliResult {
    let file: GammaFile = read_json(&args.input)?;
    let field: GammaField<T> = file.to_field()?;
    let size = field.size();
    if size < 2 {
        return Err(CliError::Invalid(format!(
            "limit sequences need a field of size at least 2 (got {size})"
        )));
    }
    let horizon = args.horizon.unwrap_or(size - 1);
    let first = first_limit(&field, args.row, horizon)?;
    let n_max = horizon.min(size - 2);
    let strong = strong_limit(&field, n_max)?;

    let mut rows = Vec::new();
    for &(q, value) in &first.report.sequence {
        rows.push(LimitCsvRow {
            kind: "first",
            r: first.row,
            n_or_q: q,
            value,
            estimate: first.report.limit_estimate,
            residual: first.report.residual,
        });
    }
    for (kind, report) in [
        ("strong_det", &strong.determinant_route),
        ("strong_prod", &strong.product_route),
    ] {
        for &(n, value) in &report.sequence {
            rows.push(LimitCsvRow {
                kind,
                r: 0,
                n_or_q: n,
                value,
                estimate: report.limit_estimate,
                residual: report.residual,
            });
        }
    }
    ctx.emitter.artifact("limits.csv", &csv_limits(&rows))?;
    ctx.emitter.note(&format!(
        "row {}: class {:?}, limit estimate {:e}, trailing residual {:e}",
        first.row, first.class, first.report.limit_estimate, first.report.residual
    ));
    ctx.emitter.note(&format!(
        "strong limit at n = {n_max}: L_partial = {:e}, determinant route ends at {:e}, product route at {:e}",
        strong.l_partial,
        strong.determinant_route.limit_estimate,
        strong.product_route.limit_estimate
    ));
    Ok(())
}

pub fn tree(ctx: &Ctx, args: &TreeArgs) -> CliResult {
    match ctx.precision {
        Precision::Float64 => run_tree::<C64>(ctx, args),
        Precision::Rational => run_tree::<Rat>(ctx, args),
    }
}

fn run_tree<T: Scalar>(ctx: &Ctx, args: &TreeArgs) -> CliResult {
    let file: TreeFile = read_json(&args.input)?;
    let tree: TreeGammaField<T> = file.to_tree()?;
    let (kernel, words) = tree.stationary_kernel(args.depth)?;
    let alphabet = *tree.alphabet();
    let stationarity = stationarity_deviation(&kernel, &alphabet, args.depth)?.to_f64();
    let prefix_support = prefix_support_deviation(&kernel, &alphabet, args.depth)?.to_f64();
    let report = nc_limits(&tree, args.depth)?;
    ctx.emitter.artifact("nc_report.json", &json_text(&report)?)?;
    ctx.emitter.note(&format!(
        "depth-{} section over {} words: stationarity deviation {:e}, prefix-support deviation {:e}",
        args.depth,
        words.len(),
        stationarity,
        prefix_support
    ));
    ctx.emitter.note(&format!(
        "partial products: g = {:e}, L = {:e}",
        report.g_partial, report.l_partial
    ));
    for (what, deviation) in [
        ("stationarity of the word-indexed kernel", stationarity),
        ("prefix support of the word-indexed kernel", prefix_support),
    ] {
        if !(deviation <= ctx.tol) {
            return Err(CliError::SelfCheck {
                what,
                deviation,
                tol: ctx.tol,
            });
        }
    }
    Ok(())
}
