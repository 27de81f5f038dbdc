//! Subcommands of the `unidisc` binary. Each returns a [`Report`]; the binary
//! renders it and turns failures into exit codes with [`exit_code`].

use std::fmt;

use unidisc_core::report::Report;

mod analyze;
mod gallery;
mod simulate;
mod sweep;

pub use analyze::{cmd_analyze, load_unitary};
pub use gallery::cmd_gallery;
pub use simulate::{cmd_simulate, Protocol, SimulateArgs, SwapState};
pub use sweep::{cmd_sweep, DEFAULT_TARGET};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const INVALID_MATRIX: i32 = 3;
    pub const PARAM_RANGE: i32 = 4;
    /// Numerical failure, including a report with failing checks.
    pub const NUMERICAL: i32 = 5;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    }
}

/// Bad invocation that clap could not catch on its own.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "usage: {}", self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn exit_code(err: &anyhow::Error) -> i32 {
    use unidisc_core::Error as E;
    if err.downcast_ref::<UsageError>().is_some() {
        return exit::USAGE;
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return exit::PARSE;
    }
    match err.downcast_ref::<E>() {
        Some(E::Parse(_) | E::NonFinite { .. }) => exit::PARSE,
        Some(
            E::NotUnitary { .. }
            | E::DimensionMismatch(_)
            | E::NotHermitian { .. }
            | E::NotAReflection { .. }
            | E::NotNormalized { .. },
        ) => exit::INVALID_MATRIX,
        Some(E::ParamOutOfRange { .. } | E::InvalidEpsilon(_)) => exit::PARAM_RANGE,
        _ => exit::NUMERICAL,
    }
}

/// Parses `key=value` with a numeric value.
pub fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(format!("empty key in `{s}`"));
    }
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("value of `{key}` is not a number"))?;
    Ok((key.to_string(), value))
}

pub(crate) fn param_error(name: &'static str, reason: impl Into<String>) -> unidisc_core::Error {
    unidisc_core::Error::ParamOutOfRange {
        name,
        reason: reason.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse() {
        assert_eq!(parse_param("epsilon=0.25"), Ok(("epsilon".into(), 0.25)));
        assert_eq!(parse_param(" t = 2 "), Ok(("t".into(), 2.0)));
        assert!(parse_param("epsilon").is_err());
        assert!(parse_param("=1").is_err());
        assert!(parse_param("x=abc").is_err());
    }

    #[test]
    fn exit_codes_follow_error_kind() {
        let code = |e: unidisc_core::Error| exit_code(&anyhow::Error::new(e));
        assert_eq!(code(unidisc_core::Error::Parse("x".into())), exit::PARSE);
        assert_eq!(code(unidisc_core::Error::NotUnitary { deviation: 1.0 }), exit::INVALID_MATRIX);
        assert_eq!(code(unidisc_core::Error::DimensionMismatch("2 vs 3".into())), exit::INVALID_MATRIX);
        assert_eq!(code(param_error("x", "bad")), exit::PARAM_RANGE);
        assert_eq!(code(unidisc_core::Error::ConvergenceFailure { residual: 1.0 }), exit::NUMERICAL);
        assert_eq!(exit_code(&anyhow::Error::new(UsageError("x".into()))), exit::USAGE);
        let wrapped = anyhow::Error::new(unidisc_core::Error::Parse("x".into())).context("reading a.json");
        assert_eq!(exit_code(&wrapped), exit::PARSE);
    }
}
