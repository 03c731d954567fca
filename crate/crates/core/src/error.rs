use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported model: genus {genus}, punctures {punctures}")]
    UnsupportedModel { genus: u32, punctures: u32 },
    #[error("invalid spec: Euler characteristic {euler} is nonnegative")]
    InvalidSpec { euler: i64 },
    #[error("unknown model id `{0}`")]
    UnknownModel(String),

    #[error("empty multicurve")]
    EmptyMulticurve,
    #[error("parity violation: m1 + m2 + m3 = {0} is odd")]
    ParityViolation(i64),
    #[error("negative twist on zero-weight curve c{0}")]
    NegativeTwistOnZeroWeight(usize),
    #[error("negative intersection weight on c{0}")]
    NegativeIntersectionWeight(usize),
    #[error("norm/model mismatch: {0}")]
    NormModelMismatch(String),
    #[error("unbounded ball: {0}")]
    UnboundedBall(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(usize),

    #[error("internal tracing inconsistency: {0}")]
    TracingInconsistency(String),

    #[error("trivial class")]
    TrivialClass,
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("not primitive: gcd is {0}")]
    NotPrimitive(u64),
    #[error("small-cancellation scan failed: {0}")]
    SmallCancellation(String),

    #[error("trace relation violated: x^2+y^2+z^2 - xyz = {residual:e}")]
    TraceRelationViolated { residual: f64 },
    #[error("elliptic or parabolic generator (trace {0})")]
    EllipticOrParabolic(f64),
    #[error("holonomy construction failed: {0}")]
    HolonomyConstruction(String),
    #[error("non-hyperbolic class (|trace| = {0})")]
    NonHyperbolic(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded: {what} cap {cap} reached (partial L = {partial_l})")]
    BudgetExceeded { what: &'static str, cap: u64, partial_l: f64 },
    #[error("degenerate series: {0}")]
    DegenerateSeries(String),
    #[error("schedule mismatch: {0}")]
    ScheduleMismatch(String),
    #[error("empty histogram")]
    EmptyHistogram,
}
