use std::fmt::Write;
use std::time::Duration;

use fermatseq::sequences::SequenceKind;

/// Everything one `lc` or `verify` run measured.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub p: u64,
    pub g: u64,
    pub delta: u64,
    pub kind: SequenceKind,
    pub lambda: u64,
    pub m: u64,
    pub wieferich: bool,
    pub l_bm: Option<usize>,
    pub l_gcd: Option<usize>,
    pub l_blahut: Option<usize>,
    pub theorem_expected: Option<u64>,
    pub pair_verified: Option<bool>,
    pub trace_verified: Option<bool>,
    pub times: Vec<(&'static str, Duration)>,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| v.to_string())
}

impl RunReport {
    fn computed(&self) -> impl Iterator<Item = usize> + '_ {
        [self.l_bm, self.l_gcd, self.l_blahut].into_iter().flatten()
    }

    /// Whether every computed linear complexity is the same.
    pub fn agree(&self) -> bool {
        let mut it = self.computed();
        match it.next() {
            Some(first) => it.all(|l| l == first),
            None => true,
        }
    }

    /// The common linear complexity, if at least one method ran and all agree.
    pub fn linear_complexity(&self) -> Option<usize> {
        if self.agree() {
            self.computed().next()
        } else {
            None
        }
    }

    /// `None` when there is no theorem value to compare with.
    pub fn matches_expected(&self) -> Option<bool> {
        let want = self.theorem_expected?;
        Some(self.linear_complexity() == Some(want as usize))
    }

    pub fn all_match(&self) -> bool {
        self.agree()
            && self.matches_expected() != Some(false)
            && self.pair_verified != Some(false)
            && self.trace_verified != Some(false)
    }

    /// Machine-readable `key=value` lines.
    pub fn to_key_values(&self, timings: bool) -> String {
        let mut s = String::new();
        let rows: [(&str, String); 15] = [
            ("p", self.p.to_string()),
            ("g", self.g.to_string()),
            ("delta", self.delta.to_string()),
            ("kind", self.kind.to_string()),
            ("lambda", self.lambda.to_string()),
            ("m", self.m.to_string()),
            ("wieferich", self.wieferich.to_string()),
            ("L_bm", opt(self.l_bm)),
            ("L_gcd", opt(self.l_gcd)),
            ("L_blahut", opt(self.l_blahut)),
            ("L", opt(self.linear_complexity())),
            ("theorem_expected", opt(self.theorem_expected)),
            ("agree", self.agree().to_string()),
            ("pair_verified", opt(self.pair_verified)),
            ("trace_verified", opt(self.trace_verified)),
        ];
        for (k, v) in rows {
            writeln!(s, "{k}={v}").unwrap();
        }
        if timings {
            for (stage, t) in &self.times {
                writeln!(s, "time_{stage}={:.6}", t.as_secs_f64()).unwrap();
            }
        }
        s
    }

    /// One-paragraph human summary.
    pub fn summary(&self) -> String {
        let mut s = format!("p={} {}: ", self.p, self.kind);
        let methods: Vec<&str> = [("bm", self.l_bm), ("gcd", self.l_gcd), ("blahut", self.l_blahut)]
            .into_iter()
            .filter(|(_, l)| l.is_some())
            .map(|(n, _)| n)
            .collect();
        match self.linear_complexity() {
            Some(l) => write!(s, "linear complexity {l} ({})", methods.join(", ")).unwrap(),
            None if self.agree() => s.push_str("no linear complexity computed"),
            None => write!(
                s,
                "methods DISAGREE (bm={}, gcd={}, blahut={})",
                opt(self.l_bm),
                opt(self.l_gcd),
                opt(self.l_blahut)
            )
            .unwrap(),
        }
        match (self.theorem_expected, self.matches_expected()) {
            (Some(want), Some(true)) => write!(s, "; matches the predicted {want}").unwrap(),
            (Some(want), _) => write!(s, "; DIFFERS from the predicted {want}").unwrap(),
            (None, _) => s.push_str("; no predicted value"),
        }
        if let Some(ok) = self.pair_verified {
            s.push_str(if ok { "; defining pair verified" } else { "; defining pair FAILED" });
        }
        if let Some(ok) = self.trace_verified {
            let n = self.p * self.p;
            if ok {
                write!(s, "; trace representation verified at all {n} positions").unwrap();
            } else {
                s.push_str("; trace representation FAILED");
            }
        }
        s.push('\n');
        s
    }
}

/// One CSV row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p: u64,
    pub kind: SequenceKind,
    pub result: Result<RunReport, String>,
    pub seconds: f64,
}

impl SweepRow {
    pub const HEADER: &'static str = "p,kind,L,expected,match,trace_verified,seconds";

    pub fn is_match(&self) -> bool {
        self.result.as_ref().is_ok_and(RunReport::all_match)
    }

    pub fn to_csv(&self, timings: bool) -> String {
        let seconds = if timings {
            format!("{:.3}", self.seconds)
        } else {
            "n/a".into()
        };
        let (l, expected, trace) = match &self.result {
            Ok(r) => (
                opt(r.linear_complexity()),
                opt(r.theorem_expected),
                opt(r.trace_verified),
            ),
            Err(_) => ("error".into(), "n/a".into(), "n/a".into()),
        };
        format!(
            "{},{},{l},{expected},{},{trace},{seconds}",
            self.p,
            self.kind,
            self.is_match()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> RunReport {
        RunReport {
            p: 7,
            g: 3,
            delta: 6,
            kind: SequenceKind::Threshold,
            lambda: 3,
            m: 21,
            wieferich: false,
            l_bm: Some(48),
            l_gcd: Some(48),
            l_blahut: None,
            theorem_expected: Some(48),
            pair_verified: None,
            trace_verified: Some(true),
            times: vec![("bm", Duration::from_millis(2))],
        }
    }

    #[test]
    fn agreement_and_match() {
        let mut r = report();
        assert!(r.agree() && r.all_match());
        assert_eq!(r.linear_complexity(), Some(48));
        r.l_blahut = Some(47);
        assert!(!r.agree() && !r.all_match());
        assert_eq!(r.linear_complexity(), None);
        let mut r = report();
        r.theorem_expected = Some(42);
        assert_eq!(r.matches_expected(), Some(false));
        assert!(!r.all_match());
        r.theorem_expected = None;
        r.trace_verified = Some(false);
        assert!(!r.all_match());
    }

    #[test]
    fn key_values_omit_timings_on_request() {
        let r = report();
        let with = r.to_key_values(true);
        let without = r.to_key_values(false);
        assert!(with.ends_with("time_bm=0.002000\n"));
        assert!(!without.contains("time_"));
        assert!(without.contains("\nL=48\n") && without.contains("\nL_blahut=n/a\n"));
    }

    #[test]
    fn csv_rows() {
        let row = SweepRow {
            p: 7,
            kind: SequenceKind::Threshold,
            result: Ok(report()),
            seconds: 0.25,
        };
        assert_eq!(row.to_csv(true), "7,threshold,48,48,true,true,0.250");
        let failed = SweepRow {
            result: Err("boom".into()),
            ..row
        };
        assert_eq!(failed.to_csv(false), "7,threshold,error,n/a,false,n/a,n/a");
    }
}
