//! Process-level failure type carrying the exit-code contract.

use std::fmt;

/// Failure of a command, sorted by exit status: invalid input exits
/// with 2, numeric failures with 3. Verification failures are not
/// errors; they exit with 1 through the command's return value.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Numeric(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(msg) | CliError::Numeric(msg) => f.write_str(msg),
        }
    }
}

/// Diagnostic tag of a library error.
pub fn variant_name(err: &exflat::Error) -> &'static str {
    use exflat::Error::*;
    match err {
        AnchorOffCircle { .. } => "AnchorOffCircle",
        DuplicateAnchors { .. } => "DuplicateAnchors",
        NonpositiveWeight { .. } => "NonpositiveWeight",
        AnchorSingularity { .. } => "AnchorSingularity",
        NonConvergence { .. } => "NonConvergence",
        RootNearBoundary { .. } => "RootNearBoundary",
        ToleranceNotMet { .. } => "ToleranceNotMet",
        PunctureTooClose { .. } => "PunctureTooClose",
        OutsideStrip { .. } => "OutsideStrip",
        OutsideDomain => "OutsideDomain",
        NoConvergence { .. } => "NoConvergence",
        DegenerateConfiguration => "DegenerateConfiguration",
        InvalidInput(_) => "InvalidInput",
    }
}

/// Sorts a library error into the exit-code classes: data validation
/// failures read as invalid input, everything else is a numeric failure.
/// Either way the message keeps the diagnostic tag.
pub fn classify(err: exflat::Error) -> CliError {
    use exflat::Error::*;
    match &err {
        InvalidInput(msg) => CliError::Invalid(msg.clone()),
        AnchorOffCircle { .. } | DuplicateAnchors { .. } | NonpositiveWeight { .. } => {
            CliError::Invalid(format!("{}: {err}", variant_name(&err)))
        }
        _ => CliError::Numeric(format!("{}: {err}", variant_name(&err))),
    }
}

/// Wraps an I/O failure; unreadable or unwritable paths are invalid input.
pub fn io_invalid(context: impl fmt::Display, err: std::io::Error) -> CliError {
    CliError::Invalid(format!("{context}: {err}"))
}
