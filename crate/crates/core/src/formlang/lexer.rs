//! Tokenizer for the expression grammar. Identifiers are classified here:
//! `z<k>` is a coordinate, `dz<k>` a coordinate differential, `i` the
//! imaginary unit, and anything else a free identifier to be resolved
//! against the caller's bindings.

use num_bigint::BigInt;

use super::ParseError;

/// Highest usable coordinate index; far past desk scale, but keeps typos
/// like `z123456789` from allocating absurd exponent vectors.
pub(crate) const MAX_VAR_INDEX: usize = 63;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum TokenKind {
    Int(BigInt),
    Ident(String),
    Var(usize),
    Diff(usize),
    ImaginaryUnit,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl TokenKind {
    pub(crate) fn describe(&self) -> String {
        match self {
            TokenKind::Int(n) => format!("number '{}'", n),
            TokenKind::Ident(s) => format!("identifier '{}'", s),
            TokenKind::Var(k) => format!("'z{}'", k),
            TokenKind::Diff(k) => format!("'dz{}'", k),
            TokenKind::ImaginaryUnit => "'i'".to_string(),
            TokenKind::Plus => "'+'".to_string(),
            TokenKind::Minus => "'-'".to_string(),
            TokenKind::Star => "'*'".to_string(),
            TokenKind::Slash => "'/'".to_string(),
            TokenKind::Caret => "'^'".to_string(),
            TokenKind::LParen => "'('".to_string(),
            TokenKind::RParen => "')'".to_string(),
            TokenKind::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

struct Scanner<'a> {
    rest: std::str::Chars<'a>,
    line: usize,
    column: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            rest: text.chars(),
            line: 1,
            column: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.rest.clone().next()
    }

    fn bump(&mut self) -> Option<char> {
        let ch = self.rest.next()?;
        if ch == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(ch)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut word = String::new();
        while let Some(ch) = self.peek() {
            if !pred(ch) {
                break;
            }
            word.push(ch);
            self.bump();
        }
        word
    }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut scanner = Scanner::new(text);
    let mut tokens = Vec::new();
    loop {
        while matches!(scanner.peek(), Some(ch) if ch.is_whitespace()) {
            scanner.bump();
        }
        let (line, column) = (scanner.line, scanner.column);
        let Some(ch) = scanner.peek() else {
            tokens.push(Token {
                kind: TokenKind::Eof,
                line,
                column,
            });
            return Ok(tokens);
        };
        let kind = if ch.is_ascii_digit() {
            let digits = scanner.take_while(|c| c.is_ascii_digit());
            TokenKind::Int(digits.parse::<BigInt>().expect("digit run parses"))
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let word = scanner.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
            classify_word(&word, line, column)?
        } else {
            scanner.bump();
            match ch {
                '+' => TokenKind::Plus,
                '-' => TokenKind::Minus,
                '*' => TokenKind::Star,
                '/' => TokenKind::Slash,
                '^' => TokenKind::Caret,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                other => {
                    return Err(ParseError::new(
                        line,
                        column,
                        format!("unexpected character '{}'", other),
                    ));
                }
            }
        };
        tokens.push(Token { kind, line, column });
    }
}

fn classify_word(word: &str, line: usize, column: usize) -> Result<TokenKind, ParseError> {
    if word == "i" {
        return Ok(TokenKind::ImaginaryUnit);
    }
    if let Some(digits) = word.strip_prefix("dz") {
        if let Some(k) = parse_index(digits) {
            check_index(k, line, column)?;
            return Ok(TokenKind::Diff(k));
        }
    }
    if let Some(digits) = word.strip_prefix('z') {
        if let Some(k) = parse_index(digits) {
            check_index(k, line, column)?;
            return Ok(TokenKind::Var(k));
        }
    }
    Ok(TokenKind::Ident(word.to_string()))
}

fn parse_index(digits: &str) -> Option<usize> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    // Very long digit runs overflow usize; report them as out of range
    // rather than treating the word as an identifier.
    Some(digits.parse::<usize>().unwrap_or(usize::MAX))
}

fn check_index(k: usize, line: usize, column: usize) -> Result<(), ParseError> {
    if k > MAX_VAR_INDEX {
        return Err(ParseError::new(
            line,
            column,
            format!(
                "coordinate index {} exceeds the supported maximum {}",
                k, MAX_VAR_INDEX
            ),
        ));
    }
    Ok(())
}
