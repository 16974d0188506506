use serde::{Deserialize, Serialize};

use super::clean::clean_html_with;

/// Default cues that open a proxy-voting-guidelines section in a fund
/// prospectus.
pub const GUIDELINE_CUES: [&str; 3] = [
    "proxy voting guidelines",
    "proxy voting policies and procedures",
    "proxy voting policy",
];

/// Extracted proxy-voting-guidelines text for one institution-year.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GuidelineDoc {
    pub institution_id: String,
    pub year: i32,
    pub body: String,
    /// Set when more than one cue occurrence was found; the first wins.
    #[serde(default)]
    pub multiple_cues: bool,
}

/// Find the guidelines section in a prospectus: the lines following the
/// first matched cue, up to the next top-level heading. Returns `None`
/// when no cue matches or the section is empty.
pub fn extract_guidelines(body: &str, institution_id: &str, year: i32) -> Option<GuidelineDoc> {
    let lines = clean_html_with(body, 0, 0);
    let mut matches = lines.iter().enumerate().filter_map(|(i, line)| {
        let lower = line.to_lowercase();
        GUIDELINE_CUES
            .iter()
            .any(|cue| lower.contains(cue))
            .then_some(i)
    });
    let start = matches.next()?;
    let multiple_cues = matches.next().is_some();
    if multiple_cues {
        log::warn!("multiple guideline cues for {institution_id}/{year}; first wins");
    }
    let mut section = Vec::new();
    for line in &lines[start + 1..] {
        if is_top_level_heading(line) {
            break;
        }
        section.push(line.as_str());
    }
    let body = section.join("\n").trim().to_owned();
    if body.is_empty() {
        return None;
    }
    Some(GuidelineDoc {
        institution_id: institution_id.to_owned(),
        year,
        body,
        multiple_cues,
    })
}

/// Heading heuristic for prospectus text: a short line that is entirely
/// uppercase, or an ITEM/PART marker.
fn is_top_level_heading(line: &str) -> bool {
    let trimmed = line.trim();
    if trimmed.len() > 80 || trimmed.is_empty() {
        return false;
    }
    let upper = trimmed.to_uppercase();
    if upper.starts_with("ITEM ") || upper.starts_with("PART ") {
        return true;
    }
    trimmed.chars().any(|c| c.is_alphabetic())
        && !trimmed.chars().any(|c| c.is_lowercase())
}
