//! Machine-checkable verification certificates.
//!
//! A certificate is a flat list of named inequality records, each with the
//! rigorously rounded bound that was computed, the threshold it was held
//! against, and the resulting slack. The overall verdict is the
//! conjunction of the record flags. Given identical inputs the records are
//! reproducible bit for bit.

/// Direction of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `bound < threshold`, strict.
    Less,
    /// `bound > threshold`, strict.
    Greater,
    /// `bound <= threshold` (closed containments).
    LessEq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Less => "<",
            Relation::Greater => ">",
            Relation::LessEq => "<=",
        }
    }

    fn eval(self, bound: f64, threshold: f64) -> bool {
        match self {
            Relation::Less => bound < threshold,
            Relation::Greater => bound > threshold,
            Relation::LessEq => bound <= threshold,
        }
    }

    fn slack(self, bound: f64, threshold: f64) -> f64 {
        match self {
            Relation::Less | Relation::LessEq => threshold - bound,
            Relation::Greater => bound - threshold,
        }
    }
}

/// One certified inequality. `name` keys the record to the inequality it
/// discharges so audits can map output back to the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityRecord {
    pub name: String,
    /// The rigorously rounded quantity that was computed.
    pub bound: f64,
    /// The value it is compared against.
    pub threshold: f64,
    pub relation: Relation,
    pub pass: bool,
    /// How far the comparison clears (negative when it fails).
    pub slack: f64,
}

impl InequalityRecord {
    pub fn new(name: impl Into<String>, bound: f64, threshold: f64, relation: Relation) -> Self {
        Self {
            name: name.into(),
            bound,
            threshold,
            relation,
            pass: relation.eval(bound, threshold),
            slack: relation.slack(bound, threshold),
        }
    }
}

/// A bundle of inequality records with the conjunction verdict.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationCertificate {
    pub records: Vec<InequalityRecord>,
    /// Atlas circumference the verification ran at, when one was chosen.
    pub resolved_v: Option<u64>,
    /// Stated only when every record passes.
    pub conclusion: Option<String>,
}

impl VerificationCertificate {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: InequalityRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, other: VerificationCertificate) {
        self.records.extend(other.records);
        if self.resolved_v.is_none() {
            self.resolved_v = other.resolved_v;
        }
    }

    /// Conjunction of all record flags.
    pub fn certified(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(|r| r.pass)
    }

    pub fn record(&self, name: &str) -> Option<&InequalityRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// Names of the failing records, in order.
    pub fn failures(&self) -> Vec<&str> {
        self.records
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.name.as_str())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_and_slack() {
        let r = InequalityRecord::new("x", 1.0, 2.0, Relation::Less);
        assert!(r.pass);
        assert_eq!(r.slack, 1.0);

        let r = InequalityRecord::new("x", 2.0, 2.0, Relation::Less);
        assert!(!r.pass);

        let r = InequalityRecord::new("x", 2.0, 2.0, Relation::LessEq);
        assert!(r.pass);
        assert_eq!(r.slack, 0.0);

        let r = InequalityRecord::new("x", 3.0, 2.0, Relation::Greater);
        assert!(r.pass);
        assert_eq!(r.slack, 1.0);
    }

    #[test]
    fn verdict_is_conjunction() {
        let mut cert = VerificationCertificate::new();
        assert!(!cert.certified());
        cert.push(InequalityRecord::new("a", 1.0, 2.0, Relation::Less));
        assert!(cert.certified());
        cert.push(InequalityRecord::new("b", 3.0, 2.0, Relation::Less));
        assert!(!cert.certified());
        assert_eq!(cert.failures(), vec!["b"]);
    }
}
