//! Tokenizer for tune body lines.

use super::NotationError;
use crate::rational::{rational, Rational};

/// Raw note fields as written: the accidental mark, the letter, the octave
/// marks and the duration text, all unvalidated except for single-direction
/// octave marks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoteToken {
    pub accidental_mark: Option<char>,
    pub letter: char,
    pub octave_marks: String,
    pub duration_text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Note(NoteToken),
    Rest { duration_text: String },
    Bar,
    Whitespace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub col: usize,
}

fn construct_name(ch: char) -> Option<&'static str> {
    match ch {
        '-' => Some("tie"),
        '(' | ')' => Some("slur"),
        '[' | ']' => Some("chord"),
        '{' | '}' => Some("grace notes"),
        ':' => Some("repeat"),
        '"' => Some("chord symbol"),
        '<' | '>' => Some("broken rhythm"),
        '~' => Some("ornament"),
        _ => None,
    }
}

fn is_note_letter(ch: char) -> bool {
    ('A'..='G').contains(&ch) || ('a'..='g').contains(&ch)
}

fn is_rest_letter(ch: char) -> bool {
    ch == 'z' || ch == 'Z'
}

/// Tokenizes one body line. `line` is 1-based; columns are 1-based character
/// offsets. A `%` starts a comment running to the end of the line.
pub fn tokenize_body_line(text: &str, line: usize) -> Result<Vec<Token>, NotationError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let ch = chars[i];
        if ch == '%' {
            break;
        }
        if ch.is_whitespace() {
            let start = i;
            while i < chars.len() && chars[i].is_whitespace() {
                i += 1;
            }
            let _ = start;
            tokens.push(Token {
                kind: TokenKind::Whitespace,
                line,
                col,
            });
            continue;
        }
        if ch == '|' {
            tokens.push(Token {
                kind: TokenKind::Bar,
                line,
                col,
            });
            i += 1;
            continue;
        }
        if let Some(construct) = construct_name(ch) {
            return Err(NotationError::UnsupportedConstruct {
                line,
                col,
                construct,
            });
        }

        // Note or rest: [accidental] letter [octave marks] [duration].
        let accidental_mark = if ch == '^' || ch == '_' || ch == '=' {
            i += 1;
            Some(ch)
        } else {
            None
        };
        let letter = match chars.get(i) {
            Some(&l) if is_note_letter(l) || is_rest_letter(l) => {
                i += 1;
                l
            }
            Some(&other) => {
                return Err(NotationError::UnrecognizedChar {
                    line,
                    col: i + 1,
                    ch: other,
                })
            }
            None => {
                return Err(NotationError::UnrecognizedChar { line, col, ch });
            }
        };

        let marks_col = i + 1;
        let mut octave_marks = String::new();
        while let Some(&m) = chars.get(i) {
            if m == ',' || m == '\'' {
                octave_marks.push(m);
                i += 1;
            } else {
                break;
            }
        }
        if octave_marks.contains(',') && octave_marks.contains('\'') {
            return Err(NotationError::MixedOctaveMarks {
                line,
                col: marks_col,
            });
        }

        let mut duration_text = String::new();
        while let Some(&d) = chars.get(i) {
            if d.is_ascii_digit() || d == '/' {
                duration_text.push(d);
                i += 1;
            } else {
                break;
            }
        }

        if is_rest_letter(letter) {
            if accidental_mark.is_some() {
                return Err(NotationError::UnsupportedConstruct {
                    line,
                    col,
                    construct: "accidental on a rest",
                });
            }
            if !octave_marks.is_empty() {
                return Err(NotationError::UnsupportedConstruct {
                    line,
                    col: marks_col,
                    construct: "octave mark on a rest",
                });
            }
            tokens.push(Token {
                kind: TokenKind::Rest { duration_text },
                line,
                col,
            });
        } else {
            tokens.push(Token {
                kind: TokenKind::Note(NoteToken {
                    accidental_mark,
                    letter,
                    octave_marks,
                    duration_text,
                }),
                line,
                col,
            });
        }
    }
    Ok(tokens)
}

/// Parses duration text into a positive rational multiplier.
///
/// Accepted forms: empty (1), `n`, `n/d`, `/d`, and bare slash runs where
/// each slash halves (`/` = 1/2, `//` = 1/4).
pub fn parse_duration_text(
    text: &str,
    line: usize,
    col: usize,
) -> Result<Rational, NotationError> {
    let bad = || NotationError::BadDuration {
        line,
        col,
        text: text.to_string(),
    };
    if text.is_empty() {
        return Ok(rational(1, 1));
    }
    let slash_start = text.find('/');
    let (num_text, rest) = match slash_start {
        Some(pos) => (&text[..pos], &text[pos..]),
        None => (text, ""),
    };
    let numerator: i64 = if num_text.is_empty() {
        1
    } else {
        num_text.parse().map_err(|_| bad())?
    };
    if numerator <= 0 {
        return Err(bad());
    }
    if rest.is_empty() {
        return Ok(rational(numerator, 1));
    }
    let slashes = rest.chars().take_while(|&c| c == '/').count();
    let den_text = &rest[slashes..];
    if den_text.is_empty() {
        let denominator = 1i64
            .checked_shl(slashes as u32)
            .filter(|&d| d > 0)
            .ok_or_else(bad)?;
        return Ok(rational(numerator, denominator));
    }
    if slashes != 1 || den_text.contains('/') {
        return Err(bad());
    }
    let denominator: i64 = den_text.parse().map_err(|_| bad())?;
    if denominator <= 0 {
        return Err(bad());
    }
    Ok(rational(numerator, denominator))
}
