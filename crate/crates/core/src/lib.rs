//! Combinatorial workbench for 5-dimensional contact open books.
//!
//! A book is a Stein page (1-handles plus Legendrian attaching circles) together with a
//! word of Dehn twists. From it the crate computes framing data, the homology of the
//! open book, spin/`c₁` information and, in the simply connected cases, the
//! diffeomorphism and contact type. Diagram and presentation moves are available as
//! checkable rewrites.

pub mod classify;
pub mod cli;
pub mod corpus;
pub mod front;
pub mod gen;
pub mod moves;
pub mod page;
pub mod twist;
pub mod words;
pub mod zalg;

use front::FrontError;
use page::PageError;
use twist::TwistError;

/// Process exit status for each error class.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const SYNTAX: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const ILLEGAL_MOVE: i32 = 4;
    pub const UNSUPPORTED: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Front(#[from] FrontError),
    #[error(transparent)]
    Page(#[from] PageError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Move(#[from] moves::MoveError),
    #[error(transparent)]
    PresMove(#[from] words::PresMoveError),
    #[error(transparent)]
    Presentation(#[from] words::PresentationError),
    #[error(transparent)]
    Search(#[from] words::SearchError),
    #[error(transparent)]
    Classify(#[from] classify::ClassifyError),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Front(e) => e.exit_code(),
            Error::Page(PageError::UnsupportedPage(_)) => exit::UNSUPPORTED,
            Error::Page(PageError::UndefinedEntries(_)) => exit::UNSUPPORTED,
            Error::Page(_) => exit::VALIDATION,
            Error::Twist(TwistError::Unsupported(_)) => exit::UNSUPPORTED,
            Error::Twist(TwistError::Page(PageError::UnsupportedPage(_) | PageError::UndefinedEntries(_))) => {
                exit::UNSUPPORTED
            }
            Error::Twist(_) => exit::VALIDATION,
            Error::Move(moves::MoveError::UndefinedLinking(_)) => exit::UNSUPPORTED,
            Error::Move(_) => exit::ILLEGAL_MOVE,
            Error::PresMove(words::PresMoveError::IllegalMove(_)) => exit::ILLEGAL_MOVE,
            Error::PresMove(_) => exit::VALIDATION,
            Error::Presentation(_) => exit::SYNTAX,
            Error::Search(words::SearchError::Unbalanced) => exit::VALIDATION,
            Error::Search(_) => exit::UNSUPPORTED,
            Error::Classify(_) => exit::UNSUPPORTED,
            Error::Syntax(_) => exit::SYNTAX,
            Error::Invalid(_) => exit::VALIDATION,
            Error::Io(_) => exit::FAILURE,
        }
    }
}

pub use front::{parse_obk, FrontDiagram, ObkFile};
pub use page::{Circle, PageDiagram};
pub use twist::{open_book_homology, HomologyProfile, OpenBook, Spin, Twist};
