/// Errors surfaced by the network, integrator and harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {field}: {message}")]
    InvalidConfig {
        field: &'static str,
        message: String,
    },

    /// The requested cell-space shift would alias around the torus.
    #[error("velocity shift saturated: |nu| = {norm:.6} exceeds the {limit} bound")]
    ShiftSaturated { norm: f64, limit: f64 },

    /// Total activity collapsed; the normalization in the update would divide
    /// by (nearly) zero. Callers may re-initialize explicitly.
    #[error("network activity collapsed to zero at step {step}")]
    DegenerateActivity { step: u64 },

    /// Activity overflowed or went NaN; the configuration is outside the
    /// stable regime.
    #[error("network activity became non-finite at step {step}")]
    NonFiniteActivity { step: u64 },

    /// Activity is too diffuse to decode a bump location.
    #[error(
        "no coherent activity bump at step {step} (resultants {resultant_x:.4}, {resultant_y:.4})"
    )]
    NoBump {
        resultant_x: f64,
        resultant_y: f64,
        step: u64,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A sample index attached to an error from inside a trajectory run.
    #[error("sample {index} (t = {t}): {source}")]
    AtSample {
        index: usize,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("sequence length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("timestamp mismatch at index {index}: {left} vs {right}")]
    TimestampMismatch { index: usize, left: f64, right: f64 },

    #[error("calibration failed: {0}")]
    Calibration(String),
}

impl Error {
    /// Wrap an error with the trajectory sample it occurred at.
    pub fn at_sample(self, index: usize, t: f64) -> Error {
        Error::AtSample {
            index,
            t,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
