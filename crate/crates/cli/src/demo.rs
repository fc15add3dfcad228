//! Built-in worked examples. Each demo prints a human-readable report to
//! stdout, optionally writes artifacts under `--out`, and fails with exit
//! code 3 when a self-check exceeds `--tol`.

use crate::output::{emit, emit_line, json_text};
use crate::{CliError, CliResult, Ctx, DemoArgs, DemoCommand, Precision};
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use szegokit::asymptotics::first_limit;
use szegokit::io::{csv_polys, GammaFile, KernelFile};
use szegokit::models::{
    hilbert_field, hilbert_gamma, hilbert_gamma_squares, hilbert_kernel_f64,
    hilbert_kernel_rational, toeplitz_field, toeplitz_kernel, ToeplitzSpec,
};
use szegokit::scalar::{RealField, Scalar};
use szegokit::{build_polys, extract_gamma, extract_gamma_squares, GammaField, C64, Rat};

pub fn run(ctx: &Ctx, args: &DemoArgs) -> CliResult {
    match args.which {
        DemoCommand::Hilbert { max } => hilbert(ctx, max),
        DemoCommand::Legendre { degree } => legendre(ctx, degree),
        DemoCommand::Toeplitz { alpha, size } => match ctx.precision {
            Precision::Float64 => toeplitz::<C64>(ctx, alpha, size),
            Precision::Rational => toeplitz::<Rat>(ctx, alpha, size),
        },
        DemoCommand::Roundtrip { seed, size } => match ctx.precision {
            Precision::Float64 => roundtrip::<C64>(ctx, seed, size),
            Precision::Rational => roundtrip::<Rat>(ctx, seed, size),
        },
    }
}

/// Extracts the parameter field of `s_{k,j} = 1/(k+j+1)` and compares every
/// entry with its closed form: `gamma_{k,k+l} = (-1)^(l-1)
/// sqrt((2k+1)(2k+2l+1))/(2k+l+1)` and `d_{k,k+l} = l/(2k+l+1)`.
fn hilbert(ctx: &Ctx, max: usize) -> CliResult {
    let size = max + 1;
    match ctx.precision {
        Precision::Rational => {
            let squares = extract_gamma_squares(&hilbert_kernel_rational(size))?;
            let mut table = String::from("k,j,sign,gamma_sq,dee,matches\n");
            let mut all_match = true;
            for k in 0..size {
                for j in (k + 1)..size {
                    let (sign, gamma_sq, dee) = hilbert_gamma_squares(k, j - k);
                    let ok = squares.sign(k, j) == sign
                        && squares.gamma_sq(k, j) == &gamma_sq
                        && squares.dee_sq(k, j) == dee.clone() * dee.clone();
                    all_match &= ok;
                    let _ = writeln!(
                        table,
                        "{k},{j},{:+},{},{},{}",
                        squares.sign(k, j),
                        squares.gamma_sq(k, j),
                        dee,
                        ok
                    );
                }
            }
            emit(&table);
            ctx.emitter.file_only("hilbert.csv", &table)?;
            ctx.emitter
                .file_only("gamma.json", &json_text(&GammaFile::from_field(&squares.to_float_field()?))?)?;
            if !all_match {
                return Err(CliError::SelfCheck {
                    what: "exact parameters vs closed forms",
                    deviation: f64::NAN,
                    tol: 0.0,
                });
            }
            emit_line(&format!("all {size}-section parameters match the closed forms exactly"));
        }
        Precision::Float64 => {
            let field = extract_gamma(&hilbert_kernel_f64(size))?;
            let mut table = String::from("k,j,gamma,dee,gamma_closed,dee_closed\n");
            let mut deviation = 0.0f64;
            for k in 0..size {
                for j in (k + 1)..size {
                    let (gamma_closed, dee_closed) = hilbert_gamma(k, j - k);
                    let gamma = field.gamma(k, j).re().to_f64();
                    let dee = field.dee(k, j).to_f64();
                    deviation = deviation
                        .max((gamma - gamma_closed).abs())
                        .max((dee - dee_closed).abs());
                    let _ = writeln!(table, "{k},{j},{gamma},{dee},{gamma_closed},{dee_closed}");
                }
            }
            emit(&table);
            ctx.emitter.file_only("hilbert.csv", &table)?;
            ctx.emitter
                .file_only("gamma.json", &json_text(&GammaFile::from_field(&field))?)?;
            emit_line(&format!("max deviation from the closed forms: {deviation:e}"));
            if !(deviation <= ctx.tol) {
                return Err(CliError::SelfCheck {
                    what: "extracted parameters vs closed forms",
                    deviation,
                    tol: ctx.tol,
                });
            }
        }
    }
    Ok(())
}

/// Tabulates the orthonormal polynomials of the reciprocal-sum kernel and
/// checks degrees 1..=3 against sqrt(3)(2x-1), sqrt(5)(6x^2-6x+1), and
/// sqrt(7)(20x^3-30x^2+12x-1).
fn legendre(ctx: &Ctx, degree: usize) -> CliResult {
    let table = match ctx.precision {
        Precision::Float64 => build_polys(&hilbert_field(degree + 1)?, degree, 0)?,
        Precision::Rational => {
            // The closed-form parameters are irrational, so exact extraction
            // succeeds only when no square root is needed (degree 0).
            let field: GammaField<Rat> = extract_gamma(&hilbert_kernel_rational(degree + 1))?;
            let body = csv_polys(&build_polys(&field, degree, 0)?);
            emit(&body);
            ctx.emitter.file_only("legendre.csv", &body)?;
            return Ok(());
        }
    };
    let closed: [&[f64]; 3] = [
        &[-1.0, 2.0],
        &[1.0, -6.0, 6.0],
        &[-1.0, 12.0, -30.0, 20.0],
    ];
    let mut deviation = 0.0f64;
    for n in 1..=degree.min(3) {
        let scale = (2 * n + 1) as f64;
        for (i, c) in table.phi(n, 0).iter().enumerate() {
            deviation = deviation.max((c.re().to_f64() - scale.sqrt() * closed[n - 1][i]).abs());
        }
    }
    let body = csv_polys(&table);
    emit(&body);
    emit_line(&format!(
        "max coefficient deviation from the closed forms (degrees 1..=3): {deviation:e}"
    ));
    ctx.emitter.file_only("legendre.csv", &body)?;
    if !(deviation <= ctx.tol) {
        return Err(CliError::SelfCheck {
            what: "orthonormal polynomial coefficients vs closed forms",
            deviation,
            tol: ctx.tol,
        });
    }
    Ok(())
}

/// Builds the constant-parameter field `gamma_{k,k+n} = alpha` for `n = 1`
/// (zero otherwise), reconstructs its kernel, and checks shift invariance
/// `K(k+1,j+1) = K(k,j)`.
fn toeplitz<T: Scalar>(ctx: &Ctx, alpha: f64, size: usize) -> CliResult {
    if size < 2 {
        return Err(CliError::Invalid(format!(
            "the shift-invariance demo needs size >= 2 (got {size})"
        )));
    }
    let spec = ToeplitzSpec::<T> {
        s0: T::Real::one(),
        verblunsky: vec![T::from_real(T::Real::from_f64_exact(alpha)?)],
    };
    let field = toeplitz_field(&spec, size)?;
    let kernel = toeplitz_kernel(&spec, size)?;
    let mut table = String::from("j,re,im\n");
    for j in 0..size {
        let (re, im) = kernel.get(0, j).to_f64_pair();
        let _ = writeln!(table, "{j},{re},{im}");
    }
    emit(&table);
    let mut shift_dev = 0.0f64;
    for k in 0..(size - 1) {
        for j in k..(size - 1) {
            shift_dev = shift_dev.max((kernel.get(k + 1, j + 1) - kernel.get(k, j)).abs_f64());
        }
    }
    let first = first_limit(&field, 0, size - 1)?;
    emit_line(&format!("shift-invariance deviation: {shift_dev:e}"));
    emit_line(&format!(
        "row 0 class {:?}, partial limit {:e}",
        first.class, first.report.limit_estimate
    ));
    ctx.emitter
        .file_only("kernel.json", &json_text(&KernelFile::from_kernel(&kernel))?)?;
    ctx.emitter
        .file_only("gamma.json", &json_text(&GammaFile::from_field(&field))?)?;
    if !(shift_dev <= ctx.tol) {
        return Err(CliError::SelfCheck {
            what: "shift invariance of the reconstructed kernel",
            deviation: shift_dev,
            tol: ctx.tol,
        });
    }
    Ok(())
}

/// Draws a seeded random field (diagonal in [0.5, 2), parameters uniform on
/// the disk of radius 0.8), reconstructs the kernel, extracts the field
/// back, and reports both round-trip deviations.
fn roundtrip<T: Scalar>(ctx: &Ctx, seed: u64, size: usize) -> CliResult {
    if size == 0 {
        return Err(CliError::Invalid("--size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut diag = Vec::with_capacity(size);
    for _ in 0..size {
        diag.push(rng.gen_range(0.5..2.0));
    }
    let mut gamma = vec![vec![(0.0f64, 0.0f64); 0]; size];
    for (k, row) in gamma.iter_mut().enumerate() {
        for _ in (k + 1)..size {
            let (re, im) = loop {
                let re = rng.gen_range(-1.0..1.0);
                let im = rng.gen_range(-1.0..1.0);
                if re * re + im * im <= 1.0 {
                    break (re, im);
                }
            };
            row.push((0.8 * re, 0.8 * im));
        }
    }
    let field: GammaField<T> = GammaField::from_fn(
        size,
        |k| T::Real::from_f64_exact(diag[k]).expect("finite diagonal sample"),
        |k, j| {
            let (re, im) = gamma[k][j - k - 1];
            scalar_from_f64::<T>(re, im).expect("finite parameter sample")
        },
    )?;

    let kernel = field.reconstruct_moments(size)?;
    let extracted = extract_gamma(&kernel)?;
    let mut param_dev = 0.0f64;
    for k in 0..size {
        param_dev = param_dev.max((field.diag(k).clone() - extracted.diag(k).clone()).to_f64().abs());
        for j in (k + 1)..size {
            param_dev =
                param_dev.max((field.gamma(k, j).clone() - extracted.gamma(k, j).clone()).abs_f64());
        }
    }
    let rebuilt = extracted.reconstruct_moments(size)?;
    let mut kernel_dev = 0.0f64;
    for k in 0..size {
        for j in k..size {
            kernel_dev = kernel_dev.max((rebuilt.get(k, j) - kernel.get(k, j)).abs_f64());
        }
    }
    emit_line(&format!("seed {seed}, size {size}"));
    emit_line(&format!(
        "parameters -> kernel -> parameters: max deviation {param_dev:e}"
    ));
    emit_line(&format!(
        "kernel -> parameters -> kernel:     max deviation {kernel_dev:e}"
    ));
    ctx.emitter
        .file_only("gamma.json", &json_text(&GammaFile::from_field(&field))?)?;
    ctx.emitter
        .file_only("kernel.json", &json_text(&KernelFile::from_kernel(&kernel))?)?;
    for (what, deviation) in [
        ("parameter round trip", param_dev),
        ("kernel round trip", kernel_dev),
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

fn scalar_from_f64<T: Scalar>(re: f64, im: f64) -> szegokit::Result<T> {
    T::from_re_im(T::Real::from_f64_exact(re)?, T::Real::from_f64_exact(im)?)
}
