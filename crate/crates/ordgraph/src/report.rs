//! Machine-readable reports for the command-line front end. Identical
//! inputs yield byte-identical output, and the exit code mirrors the
//! status: 0 pass/verified, 1 violation found, 2 invalid input.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub check: String,
    pub subject: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "n")]
pub enum Status {
    Pass,
    Fail,
    VerifiedUpTo(usize),
    Invalid,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub status: Status,
    pub findings: Vec<Finding>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub output: Vec<String>,
}

impl Report {
    pub fn new(command: String, status: Status) -> Report {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            status,
            findings: Vec::new(),
            output: Vec::new(),
        }
    }

    pub fn finding(&mut self, check: &str, subject: String, witness: Option<String>) {
        self.findings.push(Finding {
            check: check.to_string(),
            subject,
            witness,
        });
    }

    pub fn line(&mut self, s: String) {
        self.output.push(s);
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass | Status::VerifiedUpTo(_) => 0,
            Status::Fail => 1,
            Status::Invalid => 2,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for line in &self.output {
            out.push_str(line);
            out.push('\n');
        }
        let status = match &self.status {
            Status::Pass => "pass".to_string(),
            Status::Fail => "fail".to_string(),
            Status::VerifiedUpTo(n) => format!("verified_up_to({n})"),
            Status::Invalid => "invalid".to_string(),
        };
        out.push_str(&format!("status: {status}\n"));
        for f in &self.findings {
            out.push_str(&format!("finding: {} {}", f.check, f.subject));
            if let Some(w) = &f.witness {
                out.push_str(&format!(" witness={w}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
