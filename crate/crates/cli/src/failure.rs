use serde::Serialize;
use zlab_core::Error;

/// A failed run, reported as one JSON line on stderr.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub error: &'static str,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            error: "usage",
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            error: "io",
            message: message.into(),
        }
    }

    /// 2 for anything the caller can fix by changing parameters, 3 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self.error {
            "usage" | "domain" | "invalid-input" | "invalid-rectangle" => 2,
            _ => 3,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("failure serializes")
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let error = match e {
            Error::PoleAt1 => "pole",
            Error::AccuracyUnreachable { .. } => "accuracy-unreachable",
            Error::Domain(_) => "domain",
            Error::ToleranceNotMet { .. } => "tolerance-not-met",
            Error::InvalidRectangle(_) => "invalid-rectangle",
            Error::InvalidInput(_) => "invalid-input",
        };
        Self {
            error,
            message: e.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes() {
        assert_eq!(Failure::usage("x").exit_code(), 2);
        assert_eq!(Failure::from(Error::PoleAt1).exit_code(), 3);
        assert_eq!(Failure::from(Error::Domain("d".into())).exit_code(), 2);
        assert_eq!(Failure::io("disk").exit_code(), 3);
    }

    #[test]
    fn single_line_json() {
        let line = Failure::usage("bad\nflag").to_json_line();
        assert!(!line.contains('\n'));
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["error"], "usage");
    }
}
