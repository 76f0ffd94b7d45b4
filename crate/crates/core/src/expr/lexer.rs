use super::{ExprError, ExprErrorKind, Span};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Num(f64),
    Var(usize),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            i += 1;
            out.push(Token { tok, span: Span::new(start, i) });
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            i = scan_number(bytes, i).map_err(|at| {
                ExprError::new(ExprErrorKind::Lexical, Span::new(start, at.max(start + 1)), "malformed number")
            })?;
            let text = &src[start..i];
            let v: f64 = text.parse().map_err(|_| {
                ExprError::new(ExprErrorKind::Lexical, Span::new(start, i), format!("malformed number `{text}`"))
            })?;
            if !v.is_finite() {
                return Err(ExprError::new(
                    ExprErrorKind::Lexical,
                    Span::new(start, i),
                    format!("number `{text}` overflows"),
                ));
            }
            out.push(Token { tok: Tok::Num(v), span: Span::new(start, i) });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &src[start..i];
            let tok = match word.strip_prefix("x_") {
                Some(idx) if !idx.is_empty() && idx.bytes().all(|b| b.is_ascii_digit()) => {
                    let k = idx.parse::<usize>().map_err(|_| {
                        ExprError::new(ExprErrorKind::Lexical, Span::new(start, i), "variable index too large")
                    })?;
                    Tok::Var(k)
                }
                Some(_) => {
                    return Err(ExprError::new(
                        ExprErrorKind::Lexical,
                        Span::new(start, i),
                        format!("malformed variable `{word}`"),
                    ))
                }
                None => Tok::Ident(word.to_string()),
            };
            out.push(Token { tok, span: Span::new(start, i) });
            continue;
        }
        let ch = src[start..].chars().next().unwrap_or('?');
        return Err(ExprError::new(
            ExprErrorKind::Lexical,
            Span::new(start, start + ch.len_utf8()),
            format!("unexpected character `{ch}`"),
        ));
    }
    out.push(Token { tok: Tok::End, span: Span::new(src.len(), src.len()) });
    Ok(out)
}

/// Returns the end of a decimal literal starting at `i`, or the offset of
/// the offending byte.
fn scan_number(b: &[u8], mut i: usize) -> Result<usize, usize> {
    let digits = |b: &[u8], mut i: usize| {
        let s = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        (i, i - s)
    };
    let (j, int_len) = digits(b, i);
    i = j;
    let mut frac_len = 0;
    if i < b.len() && b[i] == b'.' {
        let (j, n) = digits(b, i + 1);
        i = j;
        frac_len = n;
    }
    if int_len + frac_len == 0 {
        return Err(i);
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut k = i + 1;
        if k < b.len() && (b[k] == b'+' || b[k] == b'-') {
            k += 1;
        }
        let (j, n) = digits(b, k);
        if n == 0 {
            return Err(j);
        }
        i = j;
    }
    if i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'.' || b[i] == b'_') {
        return Err(i);
    }
    Ok(i)
}
