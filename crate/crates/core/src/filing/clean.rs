/// Lines trimmed from the head (filer boilerplate) and tail (conversion
/// junk) of a cleaned filing.
const HEAD_TRIM: usize = 75;
const TAIL_TRIM: usize = 75;

/// Clean a raw filing into a line list: tables dropped, markup stripped,
/// accents folded to ASCII, whitespace collapsed, blank lines removed, and
/// the first and last 75 lines cut.
pub fn clean_html(body: &str) -> Vec<String> {
    clean_html_with(body, HEAD_TRIM, TAIL_TRIM)
}

/// As [`clean_html`] with explicit head/tail trims (message extraction
/// cleans without trimming).
pub fn clean_html_with(body: &str, head_trim: usize, tail_trim: usize) -> Vec<String> {
    let without_tables = drop_tables(body);
    let stripped = strip_markup(&without_tables);
    let mut lines: Vec<String> = stripped
        .lines()
        .map(collapse_whitespace)
        .filter(|l| !l.is_empty())
        .collect();
    if lines.len() <= head_trim + tail_trim {
        return Vec::new();
    }
    lines.drain(..head_trim);
    lines.truncate(lines.len() - tail_trim);
    lines
}

/// Remove `<table>...</table>` spans (case-insensitive). An unclosed table
/// runs to the end of the document.
fn drop_tables(body: &str) -> String {
    let lower = body.to_lowercase();
    let mut out = String::with_capacity(body.len());
    let mut pos = 0;
    while let Some(open) = lower[pos..].find("<table") {
        let open = pos + open;
        out.push_str(&body[pos..open]);
        match lower[open..].find("</table>") {
            Some(close) => pos = open + close + "</table>".len(),
            None => return out,
        }
    }
    out.push_str(&body[pos..]);
    out
}

fn strip_markup(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_tag = false;
    for c in text.chars() {
        match c {
            '<' => {
                in_tag = true;
                out.push(' ');
            }
            '>' if in_tag => in_tag = false,
            c if !in_tag => out.push(c),
            _ => {}
        }
    }
    decode_entities(&out)
}

fn decode_entities(text: &str) -> String {
    text.replace("&nbsp;", " ")
        .replace("&amp;", "&")
        .replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&#39;", "'")
        .replace("&apos;", "'")
}

fn collapse_whitespace(line: &str) -> String {
    let folded = fold_to_ascii(line);
    let mut out = String::with_capacity(folded.len());
    let mut pending = false;
    for c in folded.chars() {
        if c.is_whitespace() {
            pending = true;
        } else {
            if pending && !out.is_empty() {
                out.push(' ');
            }
            pending = false;
            out.push(c);
        }
    }
    out
}

/// Fold common accented Latin characters to ASCII and drop everything else
/// non-ASCII (including bytes that survived lossy decoding).
pub fn fold_to_ascii(text: &str) -> String {
    text.chars()
        .filter_map(|c| {
            if c.is_ascii() {
                return Some(c);
            }
            match c {
                'á' | 'à' | 'â' | 'ä' | 'ã' | 'å' => Some('a'),
                'Á' | 'À' | 'Â' | 'Ä' | 'Ã' | 'Å' => Some('A'),
                'é' | 'è' | 'ê' | 'ë' => Some('e'),
                'É' | 'È' | 'Ê' | 'Ë' => Some('E'),
                'í' | 'ì' | 'î' | 'ï' => Some('i'),
                'Í' | 'Ì' | 'Î' | 'Ï' => Some('I'),
                'ó' | 'ò' | 'ô' | 'ö' | 'õ' => Some('o'),
                'Ó' | 'Ò' | 'Ô' | 'Ö' | 'Õ' => Some('O'),
                'ú' | 'ù' | 'û' | 'ü' => Some('u'),
                'Ú' | 'Ù' | 'Û' | 'Ü' => Some('U'),
                'ñ' => Some('n'),
                'Ñ' => Some('N'),
                'ç' => Some('c'),
                'Ç' => Some('C'),
                '’' | '‘' => Some('\''),
                '“' | '”' => Some('"'),
                '—' | '–' => Some('-'),
                _ => None,
            }
        })
        .collect()
}
