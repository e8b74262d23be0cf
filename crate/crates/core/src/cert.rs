//! Certification artifacts: change classification, means-of-compliance matrix and the change
//! impact analysis (CIA) document.
//!
//! Classification is a disjunction over configurable trigger predicates. With the default
//! rule set a change is major when it touches form, fit or intended function, needs new
//! operator training, or needs the full MOPS test campaign again.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    AffectsForm,
    AffectsFit,
    AffectsIntendedFunction,
    RequiresOperatorTraining,
    RequiresFullMopsRetest,
}

impl Predicate {
    pub const ALL: [Predicate; 5] = [
        Predicate::AffectsForm,
        Predicate::AffectsFit,
        Predicate::AffectsIntendedFunction,
        Predicate::RequiresOperatorTraining,
        Predicate::RequiresFullMopsRetest,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Predicate::AffectsForm => "affects form",
            Predicate::AffectsFit => "affects fit",
            Predicate::AffectsIntendedFunction => "affects intended function",
            Predicate::RequiresOperatorTraining => "requires operator training",
            Predicate::RequiresFullMopsRetest => "requires full MOPS retest",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartNumberChange {
    pub old: String,
    pub new: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemReport {
    pub id: String,
    pub disposition: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ChangeDescriptor {
    pub description: String,
    pub hardware_change: bool,
    pub affects_form: bool,
    pub affects_fit: bool,
    pub affects_intended_function: bool,
    pub requires_operator_training: bool,
    pub requires_full_mops_retest: bool,
    pub affected_part_numbers: Vec<PartNumberChange>,
    pub open_problem_reports: Vec<ProblemReport>,
}

impl ChangeDescriptor {
    /// Receiver bandpass filter retrofit: a hardware change that leaves form, fit, function,
    /// training and MOPS scope untouched. Part numbers are illustrative.
    pub fn filter_installation() -> Self {
        Self {
            description: "Install a bandpass filter ahead of the receiver RF input to reject \
                          5G C-band fundamental and spurious emissions outside 4.0-4.6 GHz; \
                          offset its insertion loss with receiver gain."
                .into(),
            hardware_change: true,
            affected_part_numbers: vec![PartNumberChange {
                old: "RA-100-01".into(),
                new: "RA-100-02".into(),
            }],
            ..Self::default()
        }
    }

    pub fn predicate(&self, p: Predicate) -> bool {
        match p {
            Predicate::AffectsForm => self.affects_form,
            Predicate::AffectsFit => self.affects_fit,
            Predicate::AffectsIntendedFunction => self.affects_intended_function,
            Predicate::RequiresOperatorTraining => self.requires_operator_training,
            Predicate::RequiresFullMopsRetest => self.requires_full_mops_retest,
        }
    }

    pub fn set_predicate(&mut self, p: Predicate, value: bool) {
        let slot = match p {
            Predicate::AffectsForm => &mut self.affects_form,
            Predicate::AffectsFit => &mut self.affects_fit,
            Predicate::AffectsIntendedFunction => &mut self.affects_intended_function,
            Predicate::RequiresOperatorTraining => &mut self.requires_operator_training,
            Predicate::RequiresFullMopsRetest => &mut self.requires_full_mops_retest,
        };
        *slot = value;
    }

    pub fn validate(&self) -> Result<()> {
        if self.hardware_change && self.affected_part_numbers.is_empty() {
            return Err(Error::config(
                "change.affected_part_numbers",
                "a hardware change must list at least one part number evolution",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChangeLevel {
    Major,
    Minor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Classification {
    pub level: ChangeLevel,
    pub triggered_predicates: Vec<Predicate>,
}

impl Classification {
    pub fn is_consistent(&self) -> bool {
        (self.level == ChangeLevel::Major) == !self.triggered_predicates.is_empty()
    }
}

/// Which predicates make a change major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationRules {
    pub major_triggers: BTreeSet<Predicate>,
}

impl Default for ClassificationRules {
    fn default() -> Self {
        Self {
            major_triggers: Predicate::ALL.into_iter().collect(),
        }
    }
}

pub fn classify_with(rules: &ClassificationRules, change: &ChangeDescriptor) -> Classification {
    let triggered: Vec<Predicate> = rules
        .major_triggers
        .iter()
        .copied()
        .filter(|&p| change.predicate(p))
        .collect();
    Classification {
        level: if triggered.is_empty() { ChangeLevel::Minor } else { ChangeLevel::Major },
        triggered_predicates: triggered,
    }
}

pub fn classify_change(change: &ChangeDescriptor) -> Classification {
    classify_with(&ClassificationRules::default(), change)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Moc {
    TestLab,
    TestFlight,
    Analysis,
}

impl Moc {
    pub fn is_test(self) -> bool {
        matches!(self, Moc::TestLab | Moc::TestFlight)
    }

    pub fn label(self) -> &'static str {
        match self {
            Moc::TestLab => "Laboratory Test",
            Moc::TestFlight => "Flight Test",
            Moc::Analysis => "Analysis",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MocRow {
    pub standard: String,
    pub requirement_source: String,
    pub mocs: BTreeSet<Moc>,
}

impl MocRow {
    pub fn new(standard: &str, requirement_source: &str, mocs: &[Moc]) -> Self {
        Self {
            standard: standard.into(),
            requirement_source: requirement_source.into(),
            mocs: mocs.iter().copied().collect(),
        }
    }

    pub fn needs_evidence(&self) -> bool {
        self.mocs.iter().any(|m| m.is_test())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MocMatrix {
    pub rows: Vec<MocRow>,
}

impl MocMatrix {
    pub fn validate(&self) -> Result<()> {
        let problems: Vec<String> = self
            .rows
            .iter()
            .filter(|r| r.mocs.is_empty())
            .map(|r| format!("row `{}` has no means of compliance", r.standard))
            .collect();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    pub fn row(&self, standard: &str) -> Option<&MocRow> {
        self.rows.iter().find(|r| r.standard == standard)
    }
}

impl Default for MocMatrix {
    /// TSO-C87 via AMOC: tests and analysis. Product specification: tests.
    fn default() -> Self {
        Self {
            rows: vec![
                MocRow::new("TSO-C87", "AMOC", &[Moc::TestLab, Moc::Analysis]),
                MocRow::new("Non-Regulatory", "Product Specification", &[Moc::TestLab]),
            ],
        }
    }
}

/// Validate rows and merge duplicate standards (union of MOCs, first requirement source and
/// first position kept).
pub fn build_moc_matrix(entries: impl IntoIterator<Item = MocRow>) -> Result<MocMatrix> {
    let mut rows: Vec<MocRow> = Vec::new();
    let mut problems = Vec::new();
    for e in entries {
        if e.mocs.is_empty() {
            problems.push(format!("row `{}` has no means of compliance", e.standard));
            continue;
        }
        match rows.iter_mut().find(|r| r.standard == e.standard) {
            Some(existing) => existing.mocs.extend(e.mocs),
            None => rows.push(e),
        }
    }
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }
    Ok(MocMatrix { rows })
}

/// Links a matrix row to a piece of verification evidence (a report fingerprint).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvidenceLink {
    pub standard: String,
    pub fingerprint: String,
    #[serde(default)]
    pub description: String,
}

/// Free-text sections of the CIA.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CiaNotes {
    pub schedule_note: String,
    pub affected_regulations: Vec<String>,
    pub return_to_service_note: String,
}

impl Default for CiaNotes {
    fn default() -> Self {
        Self {
            schedule_note: "Completion estimate set at project start; subject to filter lead \
                            time, laboratory availability, flight-test licensing and TSO \
                            approval turnaround."
                .into(),
            affected_regulations: vec![
                "TSO-C87".into(),
                "RTCA DO-155 (MOPS)".into(),
                "14 CFR Part 37".into(),
                "AC 25-7D".into(),
                "Product Specification".into(),
            ],
            return_to_service_note: "Service Bulletin to affected operators: remove legacy \
                                     unit, install and check out modified unit."
                .into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CiaDocument {
    pub declaration: Classification,
    pub classification_rules: ClassificationRules,
    pub change: ChangeDescriptor,
    pub schedule_note: String,
    pub affected_regulations: Vec<String>,
    pub moc_matrix: MocMatrix,
    pub verification_evidence: Vec<EvidenceLink>,
    pub return_to_service_note: String,
}

impl CiaDocument {
    pub fn affected_part_numbers(&self) -> &[PartNumberChange] {
        &self.change.affected_part_numbers
    }

    pub fn modification_description(&self) -> &str {
        &self.change.description
    }

    /// Collect every problem rather than stopping at the first.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if let Err(e) = self.change.validate() {
            problems.push(e.to_string());
        }
        if !self.declaration.is_consistent() {
            problems.push("declaration level disagrees with its triggered predicates".into());
        }
        if classify_with(&self.classification_rules, &self.change) != self.declaration {
            problems.push(format!(
                "declared {:?} with {:?} is inconsistent with the change descriptor",
                self.declaration.level, self.declaration.triggered_predicates
            ));
        }
        if let Err(Error::Validation(v)) = self.moc_matrix.validate() {
            problems.extend(v);
        }
        let mut seen = BTreeSet::new();
        for r in &self.moc_matrix.rows {
            if !seen.insert(r.standard.as_str()) {
                problems.push(format!("duplicate matrix row `{}`", r.standard));
            }
        }
        for r in self.moc_matrix.rows.iter().filter(|r| r.needs_evidence()) {
            if !self.verification_evidence.iter().any(|e| e.standard == r.standard) {
                problems.push(format!("test row `{}` has no verification evidence", r.standard));
            }
        }
        for e in &self.verification_evidence {
            if self.moc_matrix.row(&e.standard).is_none() {
                problems.push(format!(
                    "evidence {} references unknown row `{}`",
                    e.fingerprint, e.standard
                ));
            }
            if e.fingerprint.is_empty() || !e.fingerprint.bytes().all(|b| b.is_ascii_hexdigit()) {
                problems.push(format!(
                    "evidence for row `{}` has a malformed fingerprint `{}`",
                    e.standard, e.fingerprint
                ));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }
}

/// Assemble and validate a CIA document.
pub fn build_cia(
    change: ChangeDescriptor,
    classification: Classification,
    matrix: MocMatrix,
    evidence: Vec<EvidenceLink>,
    notes: CiaNotes,
) -> Result<CiaDocument> {
    build_cia_with(ClassificationRules::default(), change, classification, matrix, evidence, notes)
}

pub fn build_cia_with(
    rules: ClassificationRules,
    change: ChangeDescriptor,
    classification: Classification,
    matrix: MocMatrix,
    evidence: Vec<EvidenceLink>,
    notes: CiaNotes,
) -> Result<CiaDocument> {
    let doc = CiaDocument {
        declaration: classification,
        classification_rules: rules,
        change,
        schedule_note: notes.schedule_note,
        affected_regulations: notes.affected_regulations,
        moc_matrix: matrix,
        verification_evidence: evidence,
        return_to_service_note: notes.return_to_service_note,
    };
    doc.validate()?;
    Ok(doc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocFormat {
    Json,
    Text,
}

/// Section headings of the text rendering, in order.
pub const SECTION_HEADINGS: [&str; 8] = [
    "Declaration of the Change",
    "Project Schedule",
    "Affected Part Number",
    "Modification Description",
    "Affected Regulations/Requirements/Standards",
    "Compliance Strategy and MOC",
    "Verification Methods",
    "Return to Service",
];

/// Render a validated document. JSON is canonical; text follows [`SECTION_HEADINGS`].
pub fn emit_document(doc: &CiaDocument, format: DocFormat) -> Result<Vec<u8>> {
    doc.validate()?;
    match format {
        DocFormat::Json => json::canonical_bytes(doc),
        DocFormat::Text => Ok(render_text(doc).into_bytes()),
    }
}

pub fn parse_document(bytes: &[u8]) -> Result<CiaDocument> {
    Ok(serde_json::from_slice(bytes)?)
}

fn render_text(doc: &CiaDocument) -> String {
    let mut s = String::new();
    let section = |s: &mut String, i: usize| {
        if i > 0 {
            s.push('\n');
        }
        let heading = format!("{}. {}", i + 1, SECTION_HEADINGS[i]);
        let _ = writeln!(s, "{heading}\n{}", "-".repeat(heading.len()));
    };
    s.push_str("CHANGE IMPACT ANALYSIS\n======================\n\n");

    section(&mut s, 0);
    let level = match doc.declaration.level {
        ChangeLevel::Major => "MAJOR",
        ChangeLevel::Minor => "MINOR",
    };
    let kind = if doc.change.hardware_change { "hardware change" } else { "change" };
    let _ = writeln!(s, "Classification: {level} {kind}");
    if doc.declaration.triggered_predicates.is_empty() {
        let _ = writeln!(s, "Triggered predicates: none");
    } else {
        let labels: Vec<_> = doc.declaration.triggered_predicates.iter().map(|p| p.label()).collect();
        let _ = writeln!(s, "Triggered predicates: {}", labels.join(", "));
    }
    for p in Predicate::ALL {
        let _ = writeln!(s, "  [{}] {}", if doc.change.predicate(p) { "x" } else { " " }, p.label());
    }

    section(&mut s, 1);
    let _ = writeln!(s, "{}", doc.schedule_note);

    section(&mut s, 2);
    if doc.change.affected_part_numbers.is_empty() {
        let _ = writeln!(s, "None");
    }
    for pn in &doc.change.affected_part_numbers {
        let _ = writeln!(s, "  {} -> {}", pn.old, pn.new);
    }

    section(&mut s, 3);
    let _ = writeln!(s, "{}", doc.change.description);
    if !doc.change.open_problem_reports.is_empty() {
        let _ = writeln!(s, "Open problem reports reviewed:");
        for opr in &doc.change.open_problem_reports {
            let _ = writeln!(s, "  {}: {}", opr.id, opr.disposition);
        }
    }

    section(&mut s, 4);
    for r in &doc.affected_regulations {
        let _ = writeln!(s, "  - {r}");
    }

    section(&mut s, 5);
    for row in &doc.moc_matrix.rows {
        let mocs: Vec<_> = row.mocs.iter().map(|m| m.label()).collect();
        let _ = writeln!(s, "  {} | {} | {}", row.standard, row.requirement_source, mocs.join(", "));
    }

    section(&mut s, 6);
    for row in &doc.moc_matrix.rows {
        let _ = writeln!(s, "  {}:", row.standard);
        let linked: Vec<_> = doc
            .verification_evidence
            .iter()
            .filter(|e| e.standard == row.standard)
            .collect();
        if linked.is_empty() {
            let _ = writeln!(s, "    (analysis only)");
        }
        for e in linked {
            if e.description.is_empty() {
                let _ = writeln!(s, "    evidence {}", e.fingerprint);
            } else {
                let _ = writeln!(s, "    evidence {} ({})", e.fingerprint, e.description);
            }
        }
    }

    section(&mut s, 7);
    let _ = writeln!(s, "{}", doc.return_to_service_note);
    s
}
