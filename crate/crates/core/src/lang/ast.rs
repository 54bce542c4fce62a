use serde::Serialize;

/// The three arrays a program can name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Ipt,
    Scr,
    Opt,
}

impl Region {
    /// Regions usable as guards and operands, in grammar order.
    pub const READABLE: [Region; 3] = [Region::Ipt, Region::Scr, Region::Opt];
    /// Regions usable as assignment targets, in grammar order.
    pub const WRITABLE: [Region; 2] = [Region::Scr, Region::Opt];

    pub fn name(self) -> &'static str {
        match self {
            Region::Ipt => "ipt",
            Region::Scr => "scr",
            Region::Opt => "opt",
        }
    }
}

/// `region[index]` with a single-digit index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ArrayRef {
    pub region: Region,
    pub index: u8,
}

impl ArrayRef {
    pub fn new(region: Region, index: u8) -> Self {
        debug_assert!(index <= 9);
        Self { region, index }
    }

    pub fn is_assignable(&self) -> bool {
        self.region != Region::Ipt
    }
}

/// Right-hand sides. Operands are cells or digit literals; nothing nests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Add(ArrayRef, ArrayRef),
    Mul(ArrayRef, ArrayRef),
    AddConst(ArrayRef, u8),
    MulConst(ArrayRef, u8),
    Ref(ArrayRef),
    Const(u8),
}

impl Expr {
    pub fn token_len(&self) -> usize {
        match self {
            Expr::Add(..) | Expr::Mul(..) => 9,
            Expr::AddConst(..) | Expr::MulConst(..) => 6,
            Expr::Ref(_) => 4,
            Expr::Const(_) => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stmt {
    Assign {
        place: ArrayRef,
        expr: Expr,
    },
    Ife {
        guard: ArrayRef,
        then: Block,
        otherwise: Block,
    },
    Whl {
        guard: ArrayRef,
        body: Block,
    },
}

impl Stmt {
    pub fn token_len(&self) -> usize {
        match self {
            Stmt::Assign { expr, .. } => 5 + expr.token_len(),
            Stmt::Ife { then, otherwise, .. } => 9 + then.token_len() + otherwise.token_len(),
            Stmt::Whl { body, .. } => 7 + body.token_len(),
        }
    }
}

/// `S ; S ; ... ; S` optionally ending in `hlt`.
///
/// Invariant: `stmts` is nonempty or `halts` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Block {
    pub stmts: Vec<Stmt>,
    pub halts: bool,
}

impl Block {
    pub fn hlt() -> Self {
        Self {
            stmts: Vec::new(),
            halts: true,
        }
    }

    pub fn token_len(&self) -> usize {
        let stmts: usize = self.stmts.iter().map(Stmt::token_len).sum();
        let parts = self.stmts.len() + usize::from(self.halts);
        stmts + usize::from(self.halts) + parts.saturating_sub(1)
    }
}

/// `fun f0 ( ipt : W ^ N ) -> W ^ N { B }`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Function {
    /// Input arity, 1..=9.
    pub inputs: u8,
    /// Output arity, 1..=9.
    pub outputs: u8,
    pub body: Block,
}

impl Function {
    /// Header tokens plus the closing brace.
    pub const FRAME_TOKENS: usize = 15;

    pub fn token_len(&self) -> usize {
        Self::FRAME_TOKENS + self.body.token_len()
    }
}
