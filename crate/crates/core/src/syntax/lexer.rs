use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// `#name`, `#@17` or `#<>`.
    Elem(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Amp,
    Pipe,
    Arrow,
    Iff,
    Tilde,
    EqEq,
    Open,
    Close,
    AlphaOpen,
    BetaOpen,
    RBrace,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Elem(s) => format!("element `#{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::Open => "`<<`".into(),
            Tok::Close => "`>>`".into(),
            Tok::AlphaOpen => "`_{`".into(),
            Tok::BetaOpen => "`^{`".into(),
            Tok::RBrace => "`}`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub pos: usize,
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic()
}

fn ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let peek = |i: usize| chars.get(i).map(|&(_, c)| c);
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, width) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            '.' => (Tok::Dot, 1),
            '&' => (Tok::Amp, 1),
            '|' => (Tok::Pipe, 1),
            '~' => (Tok::Tilde, 1),
            '}' => (Tok::RBrace, 1),
            '-' if peek(i + 1) == Some('>') => (Tok::Arrow, 2),
            '=' if peek(i + 1) == Some('=') => (Tok::EqEq, 2),
            '<' if peek(i + 1) == Some('-') && peek(i + 2) == Some('>') => (Tok::Iff, 3),
            '<' if peek(i + 1) == Some('<') => (Tok::Open, 2),
            '>' if peek(i + 1) == Some('>') => (Tok::Close, 2),
            '_' if peek(i + 1) == Some('{') => (Tok::AlphaOpen, 2),
            '^' if peek(i + 1) == Some('{') => (Tok::BetaOpen, 2),
            '#' => {
                let mut j = i + 1;
                let mut name = String::new();
                if peek(j) == Some('<') && peek(j + 1) == Some('>') {
                    name.push_str("<>");
                    j += 2;
                } else {
                    if peek(j) == Some('@') {
                        name.push('@');
                        j += 1;
                    }
                    while let Some(c) = peek(j) {
                        if ident_continue(c) {
                            name.push(c);
                            j += 1;
                        } else {
                            break;
                        }
                    }
                }
                if name.is_empty() || name == "@" {
                    return Err(SyntaxError::Lex { pos, found: c });
                }
                out.push(Spanned { tok: Tok::Elem(name), pos });
                i = j;
                continue;
            }
            c if ident_start(c) => {
                let mut j = i;
                let mut name = String::new();
                while let Some(c) = peek(j) {
                    if ident_continue(c) {
                        name.push(c);
                        j += 1;
                    } else {
                        break;
                    }
                }
                out.push(Spanned { tok: Tok::Ident(name), pos });
                i = j;
                continue;
            }
            _ => return Err(SyntaxError::Lex { pos, found: c }),
        };
        out.push(Spanned { tok, pos });
        i += width;
    }
    Ok(out)
}
