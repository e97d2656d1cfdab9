//! `zonal eval`: direct evaluation of the library's special functions.

use clap::Args;
use zonal::jack::{c_normalisation, jack_at_ones, jack_eval, jack_in_monomials, pochhammer_general};
use zonal::partitions::box_size;
use zonal::special_functions::{hypergeom_2f1_jack, selberg_laguerre, truncated_exp, HypergeomParams};
use zonal::Complex64;

use crate::config::{parse_complex, parse_complex_list, parse_partition};
use crate::CliError;

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// EN (alias truncated_exp), jack, hypergeom, selberg or pochhammer.
    pub evaluator: String,
    #[arg(long = "N")]
    pub big_n: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// A complex `re,im`, or for jack a semicolon-separated list.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long)]
    pub kappa: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
}

fn need<T: Clone>(v: &Option<T>, flag: &str, evaluator: &str) -> Result<T, CliError> {
    v.clone().ok_or_else(|| CliError::Config(format!("{evaluator} needs --{flag}")))
}

/// Real values print as a bare number, others as `re,im`.
pub fn format_value(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{},{}", z.re, z.im)
    }
}

/// The printed lines: value first, then `# ` provenance lines.
pub fn evaluate(args: &EvalArgs) -> Result<Vec<String>, CliError> {
    let name = args.evaluator.as_str();
    let mut out = Vec::new();
    match name {
        "EN" | "truncated_exp" => {
            let n = need(&args.big_n, "N", name)?;
            let x = parse_complex(&need(&args.x, "x", name)?)?;
            out.push(format_value(truncated_exp(n, x)));
            out.push(format!("# truncated_exp N={n} terms={}", n + 1));
        }
        "jack" => {
            let kappa = parse_partition(&need(&args.kappa, "kappa", name)?)?;
            let alpha = need(&args.alpha, "alpha", name)?;
            let x = parse_complex_list(&need(&args.x, "x", name)?)?;
            if x.is_empty() {
                return Err(CliError::Config("jack needs at least one variable".into()));
            }
            let p = jack_eval(&kappa, alpha, &x)?;
            let terms = jack_in_monomials(&kappa, alpha)?.coeffs.len();
            out.push(format_value(p));
            out.push(format!(
                "# monomial expansion of P_{kappa}^({alpha}) in {} variables: {terms} dominated partitions, degree {}",
                x.len(),
                kappa.weight()
            ));
            out.push(format!("# C_{kappa}^({alpha}) = {}", format_value(p * c_normalisation(&kappa, alpha)?)));
            if x.iter().all(|&v| v == x[0]) {
                let closed = x[0].powu(kappa.weight() as u32) * jack_at_ones(&kappa, alpha, x.len())?;
                let diff = (closed - p).norm() / closed.norm().max(f64::MIN_POSITIVE);
                out.push(format!("# hook-product specialisation = {} (rel diff {diff:e})", format_value(closed)));
            }
        }
        "hypergeom" => {
            let p = HypergeomParams {
                a1: need(&args.a1, "a1", name)?,
                a2: need(&args.a2, "a2", name)?,
                b1: need(&args.b1, "b1", name)?,
                alpha: need(&args.alpha, "alpha", name)?,
                s: parse_complex(&need(&args.s, "s", name)?)?,
                n: need(&args.big_n, "N", name)?,
            };
            let v = hypergeom_2f1_jack(&p)?;
            let k = p.truncation().unwrap_or(0);
            out.push(format_value(v));
            out.push(format!(
                "# terminating series over the ({k}, {}) box: {} partitions",
                p.n,
                box_size(k, p.n)
            ));
        }
        "selberg" => {
            let beta = need(&args.beta, "beta", name)?;
            let n = need(&args.n, "n", name)?;
            let a = need(&args.a, "a", name)?;
            out.push(format!("{}", selberg_laguerre(beta, n, a)?));
            out.push(format!("# gamma product beta={beta} n={n} a={a}"));
        }
        "pochhammer" => {
            let u = parse_complex(&need(&args.u, "u", name)?)?;
            let kappa = parse_partition(&need(&args.kappa, "kappa", name)?)?;
            let alpha = need(&args.alpha, "alpha", name)?;
            out.push(format_value(pochhammer_general(u, &kappa, alpha, kappa.length())?));
            out.push(format!("# product over {} cells of {kappa}", kappa.weight()));
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown evaluator {other:?}; expected EN, jack, hypergeom, selberg or pochhammer"
            )))
        }
    }
    Ok(out)
}

pub fn run(args: &EvalArgs) -> Result<i32, CliError> {
    for line in evaluate(args)? {
        println!("{line}");
    }
    Ok(0)
}
