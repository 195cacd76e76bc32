use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Sampled search found nothing; no claim either way.
    Undecided,
    /// Recorded outside the guaranteed regime; never a failure.
    Measured,
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub suite: String,
    pub claim: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub claims: Vec<Claim>,
}

impl Report {
    pub fn push(&mut self, suite: &str, claim: &str, ok: bool, detail: impl Into<String>) {
        self.claims.push(Claim {
            suite: suite.into(),
            claim: claim.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        });
    }

    pub fn push_status(&mut self, suite: &str, claim: &str, status: Status, detail: impl Into<String>) {
        self.claims.push(Claim { suite: suite.into(), claim: claim.into(), status, detail: detail.into() });
    }

    pub fn failed(&self) -> bool {
        self.claims.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.claims {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Undecided => "UNDECIDED",
                Status::Measured => "MEASURED",
            };
            out.push_str(&format!("{tag:<9} {}.{}  {}\n", c.suite, c.claim, c.detail));
        }
        let fails = self.claims.iter().filter(|c| c.status == Status::Fail).count();
        out.push_str(&format!("{} claims, {} failed\n", self.claims.len(), fails));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
