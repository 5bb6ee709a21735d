use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A pixel component or scalar lies outside the domain an operation accepts.
    Domain { what: &'static str, value: f64 },
    /// Two images that must share a size do not.
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// A parameter is out of range or an argument combination is not allowed.
    Parameter(&'static str),
    /// Inputs that individually look valid but contradict each other.
    Inconsistent(&'static str),
    /// The image is smaller than an operation's analysis window.
    TooSmall {
        min: usize,
        width: usize,
        height: usize,
    },
    /// Entropy-coded payload could not be decoded.
    Decode { offset: usize, reason: &'static str },
    /// Container bytes are malformed.
    Container { offset: usize, reason: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::DimensionMismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::Parameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Inconsistent(msg) => write!(f, "inconsistent input: {msg}"),
            Error::TooSmall { min, width, height } => write!(
                f,
                "image {width}x{height} is smaller than the minimum {min}x{min}"
            ),
            Error::Decode { offset, reason } => {
                write!(f, "decode error at byte {offset}: {reason}")
            }
            Error::Container { offset, reason } => {
                write!(f, "container error at byte {offset}: {reason}")
            }
        }
    }
}

impl core::error::Error for Error {}
