//! A deliberately small CIF reader: the first data block's cell lengths and
//! angles, and the fractional coordinates of the atom site loop. Symmetry
//! operations are not applied, so the listed sites must form the full motif.

use super::{Cell, CellParameters, CrystalDocument, CRYSTAL_SCHEMA};
use crate::error::{Error, Result};

#[derive(Debug)]
struct Token {
    line: usize,
    text: String,
    /// Quoted and text-field values can never be tags or keywords.
    quoted: bool,
}

impl Token {
    fn is_tag(&self) -> bool {
        !self.quoted && self.text.starts_with('_')
    }

    fn keyword(&self) -> Option<String> {
        if self.quoted {
            return None;
        }
        let lower = self.text.to_ascii_lowercase();
        (lower == "loop_" || lower.starts_with("data_")).then_some(lower)
    }
}

fn location(line: usize) -> String {
    format!("line {line}")
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    while let Some((number, line)) = lines.next() {
        if let Some(rest) = line.strip_prefix(';') {
            // multi-line text field, closed by a line starting with ';'
            let mut value = rest.to_string();
            let mut closed = false;
            for (_, next) in lines.by_ref() {
                if next.starts_with(';') {
                    closed = true;
                    break;
                }
                value.push('\n');
                value.push_str(next);
            }
            if !closed {
                return Err(Error::parse(location(number), "unterminated text field"));
            }
            tokens.push(Token {
                line: number,
                text: value,
                quoted: true,
            });
            continue;
        }
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c == '#' {
                break;
            } else if c == '\'' || c == '"' {
                // a quote only closes when followed by whitespace or the line end
                let mut j = i + 1;
                while j < chars.len() && !(chars[j] == c && chars.get(j + 1).is_none_or(|n| n.is_whitespace())) {
                    j += 1;
                }
                if j >= chars.len() {
                    return Err(Error::parse(location(number), "unterminated quoted value"));
                }
                tokens.push(Token {
                    line: number,
                    text: chars[i + 1..j].iter().collect(),
                    quoted: true,
                });
                i = j + 1;
            } else {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() {
                    i += 1;
                }
                tokens.push(Token {
                    line: number,
                    text: chars[start..i].iter().collect(),
                    quoted: false,
                });
            }
        }
    }
    Ok(tokens)
}

/// Parses a CIF number, dropping a standard uncertainty such as `5.431(2)`.
fn number(token: &Token, tag: &str) -> Result<f64> {
    let text = token.text.trim();
    let plain = match text.find('(') {
        Some(open) if text.ends_with(')') => &text[..open],
        _ => text,
    };
    plain.parse::<f64>().map_err(|_| {
        Error::parse(
            location(token.line),
            format!("{tag}: expected a number, found {:?}", token.text),
        )
    })
}

const CELL_TAGS: [&str; 6] = [
    "_cell_length_a",
    "_cell_length_b",
    "_cell_length_c",
    "_cell_angle_alpha",
    "_cell_angle_beta",
    "_cell_angle_gamma",
];

/// Parses the first data block of a CIF file. `fallback_id` names the
/// crystal when the block name is empty.
pub fn parse_cif(text: &str, fallback_id: &str) -> Result<CrystalDocument> {
    let tokens = tokenize(text)?;
    let mut id: Option<String> = None;
    let mut cell: [Option<f64>; 6] = [None; 6];
    let mut motif: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut sites_line: Option<usize> = None;
    let mut i = 0;
    while i < tokens.len() {
        let token = &tokens[i];
        match token.keyword().as_deref() {
            Some(k) if k.starts_with("data_") => {
                if id.is_some() {
                    log::warn!("{}: only the first data block is read", location(token.line));
                    break;
                }
                id = Some(token.text[5..].to_string());
                i += 1;
            }
            Some(_) => {
                let start = token.line;
                i += 1;
                let mut tags = Vec::new();
                while i < tokens.len() && tokens[i].is_tag() {
                    tags.push(tokens[i].text.to_ascii_lowercase());
                    i += 1;
                }
                let mut values = Vec::new();
                while i < tokens.len() && !tokens[i].is_tag() && tokens[i].keyword().is_none() {
                    values.push(&tokens[i]);
                    i += 1;
                }
                if tags.is_empty() {
                    return Err(Error::parse(location(start), "loop_ without tags"));
                }
                if values.len() % tags.len() != 0 {
                    return Err(Error::parse(
                        location(start),
                        format!("loop has {} values for {} tags", values.len(), tags.len()),
                    ));
                }
                let column = |name: &str| tags.iter().position(|t| t == name);
                if tags.iter().any(|t| t.starts_with("_symmetry_equiv_pos") || t.starts_with("_space_group_symop")) {
                    let ops = values.len() / tags.len();
                    if ops > 1 {
                        log::warn!(
                            "{}: {ops} symmetry operations are ignored; only listed sites are used",
                            location(start)
                        );
                    }
                }
                let (Some(x), Some(y), Some(z)) = (
                    column("_atom_site_fract_x"),
                    column("_atom_site_fract_y"),
                    column("_atom_site_fract_z"),
                ) else {
                    continue;
                };
                if sites_line.is_some() {
                    return Err(Error::parse(location(start), "second atom site loop"));
                }
                sites_line = Some(start);
                let label = column("_atom_site_label").or_else(|| column("_atom_site_type_symbol"));
                for row in values.chunks(tags.len()) {
                    motif.push(vec![
                        number(row[x], "_atom_site_fract_x")?,
                        number(row[y], "_atom_site_fract_y")?,
                        number(row[z], "_atom_site_fract_z")?,
                    ]);
                    if let Some(l) = label {
                        labels.push(row[l].text.clone());
                    }
                }
            }
            None if token.is_tag() => {
                let tag = token.text.to_ascii_lowercase();
                let Some(value) = tokens.get(i + 1).filter(|v| !v.is_tag() && v.keyword().is_none()) else {
                    return Err(Error::parse(location(token.line), format!("{tag} has no value")));
                };
                if let Some(slot) = CELL_TAGS.iter().position(|t| *t == tag) {
                    cell[slot] = Some(number(value, &tag)?);
                }
                i += 2;
            }
            None => {
                return Err(Error::parse(
                    location(token.line),
                    format!("unexpected value {:?}", token.text),
                ));
            }
        }
    }
    for (slot, tag) in CELL_TAGS.iter().enumerate() {
        if cell[slot].is_none() {
            return Err(Error::parse("cell", format!("missing {tag}")));
        }
    }
    if motif.is_empty() {
        return Err(Error::parse(
            "atom sites",
            "no loop with _atom_site_fract_x, _atom_site_fract_y and _atom_site_fract_z",
        ));
    }
    let id = id.filter(|s| !s.is_empty()).unwrap_or_else(|| fallback_id.to_string());
    Ok(CrystalDocument {
        schema: CRYSTAL_SCHEMA.into(),
        id,
        cell: Cell::Parameters(CellParameters {
            a: cell[0].unwrap(),
            b: cell[1],
            c: cell[2],
            alpha: cell[3],
            beta: cell[4],
            gamma: cell[5],
        }),
        labels: (labels.len() == motif.len()).then_some(labels),
        motif,
    })
}
