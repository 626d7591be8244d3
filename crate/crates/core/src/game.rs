//! Deterministic two-player board games with a single terminal reward.
//!
//! Two rule sets are provided:
//!
//! * **connect-k**: pieces drop into columns under gravity; `k` in a row
//!   (horizontal, vertical or diagonal) wins, a full board is a draw. The
//!   action index is the column.
//! * **breakthrough-variant**: each side starts with `pawn_rows` full rows of
//!   pawns on its home edge. A pawn steps one row forward, straight onto an
//!   empty cell or diagonally onto an empty or enemy cell (capturing it).
//!   Reaching the far row, capturing every enemy pawn, or leaving the opponent
//!   without a legal move wins. The action index is
//!   `(row * cols + col) * 3 + dir` with `dir` 0/1/2 for left-diagonal,
//!   straight and right-diagonal.
//!
//! Player one moves first, its home row is row 0 and it advances towards
//! higher rows. For connect-k, row 0 is the bottom of the board.
//!
//! Reaching `max_moves` plies without a result is a draw.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Version tag of [`encode_state`] and of the [`StateKey`] bit layout.
pub const STATE_ENCODING_VERSION: u8 = 1;

/// Largest board the packed state key can hold.
pub const MAX_CELLS: usize = 55;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rules {
    BreakthroughVariant,
    ConnectK,
}

impl Rules {
    pub fn id(self) -> u8 {
        match self {
            Rules::BreakthroughVariant => 1,
            Rules::ConnectK => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rules::BreakthroughVariant => "breakthrough-variant",
            Rules::ConnectK => "connect-k",
        }
    }

    fn from_id(id: u8) -> Option<Self> {
        match id {
            1 => Some(Rules::BreakthroughVariant),
            2 => Some(Rules::ConnectK),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameConfig {
    pub rules: Rules,
    pub rows: usize,
    pub cols: usize,
    /// Line length that wins connect-k. Ignored by breakthrough.
    pub k: usize,
    /// Rows of pawns per side. Ignored by connect-k.
    pub pawn_rows: usize,
    /// Forced-draw cap on the number of plies.
    pub max_moves: usize,
}

impl GameConfig {
    pub fn connect_k(rows: usize, cols: usize, k: usize) -> Self {
        GameConfig {
            rules: Rules::ConnectK,
            rows,
            cols,
            k,
            pawn_rows: 0,
            max_moves: 4 * rows * cols,
        }
    }

    pub fn breakthrough(rows: usize, cols: usize, pawn_rows: usize) -> Self {
        GameConfig {
            rules: Rules::BreakthroughVariant,
            rows,
            cols,
            k: 0,
            pawn_rows,
            max_moves: 4 * rows * cols,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.rows < 2 || self.cols < 2 {
            return bad(format!("board {}x{} is below 2x2", self.rows, self.cols));
        }
        if self.rows > 63 || self.cols > 63 || self.rows * self.cols > MAX_CELLS {
            return bad(format!(
                "board {}x{} exceeds {MAX_CELLS} cells",
                self.rows, self.cols
            ));
        }
        if self.max_moves < self.rows * self.cols {
            return bad(format!(
                "max_moves {} is below rows*cols = {}",
                self.max_moves,
                self.rows * self.cols
            ));
        }
        match self.rules {
            Rules::ConnectK => {
                if self.k == 0 || self.k > self.rows.max(self.cols) {
                    return bad(format!(
                        "k = {} must be in 1..={}",
                        self.k,
                        self.rows.max(self.cols)
                    ));
                }
            }
            Rules::BreakthroughVariant => {
                let limit = self.rows.div_ceil(2);
                if self.pawn_rows == 0 || self.pawn_rows >= limit {
                    return bad(format!(
                        "pawn_rows = {} must be in 1..{limit}",
                        self.pawn_rows
                    ));
                }
            }
        }
        Ok(())
    }

    /// Size of the dense action enumeration.
    pub fn action_space(&self) -> usize {
        match self.rules {
            Rules::ConnectK => self.cols,
            Rules::BreakthroughVariant => self.rows * self.cols * 3,
        }
    }

    /// Canonical one-line rendering, the input of config digests.
    pub fn canonical_string(&self) -> String {
        format!(
            "rules={} rows={} cols={} k={} pawn_rows={} max_moves={}",
            self.rules.name(),
            self.rows,
            self.cols,
            self.k,
            self.pawn_rows,
            self.max_moves
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Player::P1 => "p1",
            Player::P2 => "p2",
        }
    }

    pub fn parse(s: &str) -> Option<Player> {
        match s {
            "p1" => Some(Player::P1),
            "p2" => Some(Player::P2),
            _ => None,
        }
    }

    fn cell(self) -> Cell {
        match self {
            Player::P1 => Cell::P1,
            Player::P2 => Cell::P2,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Cell {
    Empty = 0,
    P1 = 1,
    P2 = 2,
}

impl Cell {
    fn from_u8(v: u8) -> Option<Cell> {
        match v {
            0 => Some(Cell::Empty),
            1 => Some(Cell::P1),
            2 => Some(Cell::P2),
            _ => None,
        }
    }

    fn owner(self) -> Option<Player> {
        match self {
            Cell::Empty => None,
            Cell::P1 => Some(Player::P1),
            Cell::P2 => Some(Player::P2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionId(pub u32);

impl ActionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Win(Player),
    Draw,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameState {
    board: Box<[Cell]>,
    mover: Player,
    move_count: u32,
    outcome: Option<Outcome>,
}

impl GameState {
    pub fn board(&self) -> &[Cell] {
        &self.board
    }

    pub fn mover(&self) -> Player {
        self.mover
    }

    pub fn move_count(&self) -> u32 {
        self.move_count
    }

    pub fn is_terminal(&self) -> bool {
        self.outcome.is_some()
    }

    pub fn count(&self, player: Player) -> usize {
        let c = player.cell();
        self.board.iter().filter(|&&x| x == c).count()
    }
}

/// Packed, fixed-width identity of a position.
///
/// Bit layout (version 1): cell `i` of the row-major board occupies bits
/// `2i..2i+2` (0 empty, 1 p1, 2 p2); bit `2 * cells` is the mover (0 p1,
/// 1 p2); bits 112..116 hold the rule id, 116..122 the row count and
/// 122..128 the column count. The move counter is not part of the key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey(pub u128);

impl StateKey {
    pub fn to_le_bytes(self) -> [u8; 16] {
        self.0.to_le_bytes()
    }

    pub fn to_hex(self) -> String {
        format!("{:032x}", self.0)
    }

    pub fn from_hex(s: &str) -> Option<StateKey> {
        if s.len() != 32 {
            return None;
        }
        u128::from_str_radix(s, 16).ok().map(StateKey)
    }
}

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:032x}", self.0)
    }
}

/// Counts reads of terminal rewards through [`StepResult`].
#[derive(Debug, Clone, Default)]
pub struct RewardProbe(Arc<AtomicU64>);

impl RewardProbe {
    pub fn reads(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone)]
pub struct StepResult {
    pub next: GameState,
    pub terminal: bool,
    rewards: [i8; 2],
    probe: Option<RewardProbe>,
}

impl StepResult {
    fn touch(&self) {
        if let Some(p) = &self.probe {
            p.0.fetch_add(1, Ordering::Relaxed);
        }
    }

    pub fn reward(&self, player: Player) -> i8 {
        self.touch();
        match player {
            Player::P1 => self.rewards[0],
            Player::P2 => self.rewards[1],
        }
    }

    pub fn reward_p1(&self) -> i8 {
        self.reward(Player::P1)
    }

    pub fn reward_p2(&self) -> i8 {
        self.reward(Player::P2)
    }

    /// Winner of a finished game. Counted as a reward read.
    pub fn winner(&self) -> Option<Player> {
        self.touch();
        match self.next.outcome {
            Some(Outcome::Win(p)) => Some(p),
            _ => None,
        }
    }
}

/// A validated rule set. Cheap to clone and share across threads.
#[derive(Debug, Clone)]
pub struct Game {
    config: GameConfig,
    probe: Option<RewardProbe>,
}

impl Game {
    pub fn new(config: GameConfig) -> Result<Game> {
        config.validate()?;
        Ok(Game {
            config,
            probe: None,
        })
    }

    /// A copy of this game whose step results count every reward read.
    pub fn instrumented(&self) -> (Game, RewardProbe) {
        let probe = RewardProbe::default();
        let game = Game {
            config: self.config.clone(),
            probe: Some(probe.clone()),
        };
        (game, probe)
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn initial_state(&self) -> GameState {
        let cfg = &self.config;
        let mut board = vec![Cell::Empty; cfg.rows * cfg.cols].into_boxed_slice();
        if cfg.rules == Rules::BreakthroughVariant {
            for r in 0..cfg.pawn_rows {
                for c in 0..cfg.cols {
                    board[r * cfg.cols + c] = Cell::P1;
                    board[(cfg.rows - 1 - r) * cfg.cols + c] = Cell::P2;
                }
            }
        }
        GameState {
            board,
            mover: Player::P1,
            move_count: 0,
            outcome: None,
        }
    }

    pub fn legal_actions(&self, state: &GameState) -> Vec<ActionId> {
        if state.is_terminal() {
            return Vec::new();
        }
        self.moves_for(&state.board, state.mover)
    }

    fn moves_for(&self, board: &[Cell], mover: Player) -> Vec<ActionId> {
        let cfg = &self.config;
        match cfg.rules {
            Rules::ConnectK => {
                let top = (cfg.rows - 1) * cfg.cols;
                (0..cfg.cols)
                    .filter(|&c| board[top + c] == Cell::Empty)
                    .map(|c| ActionId(c as u32))
                    .collect()
            }
            Rules::BreakthroughVariant => {
                let mut out = Vec::new();
                for (i, &cell) in board.iter().enumerate() {
                    if cell != mover.cell() {
                        continue;
                    }
                    for dir in 0..3 {
                        if self.breakthrough_target(board, mover, i, dir).is_some() {
                            out.push(ActionId((i * 3 + dir) as u32));
                        }
                    }
                }
                out
            }
        }
    }

    /// Destination cell of a breakthrough move, if the move is legal.
    fn breakthrough_target(
        &self,
        board: &[Cell],
        mover: Player,
        from: usize,
        dir: usize,
    ) -> Option<usize> {
        let cfg = &self.config;
        let (r, c) = ((from / cfg.cols) as isize, (from % cfg.cols) as isize);
        let dr = if mover == Player::P1 { 1 } else { -1 };
        let (nr, nc) = (r + dr, c + dir as isize - 1);
        if nr < 0 || nr >= cfg.rows as isize || nc < 0 || nc >= cfg.cols as isize {
            return None;
        }
        let to = nr as usize * cfg.cols + nc as usize;
        let target = board[to];
        let ok = if dir == 1 {
            target == Cell::Empty
        } else {
            target != mover.cell()
        };
        ok.then_some(to)
    }

    pub fn is_legal(&self, state: &GameState, action: ActionId) -> bool {
        if state.is_terminal() || action.index() >= self.config.action_space() {
            return false;
        }
        let cfg = &self.config;
        match cfg.rules {
            Rules::ConnectK => state.board[(cfg.rows - 1) * cfg.cols + action.index()] == Cell::Empty,
            Rules::BreakthroughVariant => {
                let from = action.index() / 3;
                state.board[from] == state.mover.cell()
                    && self
                        .breakthrough_target(&state.board, state.mover, from, action.index() % 3)
                        .is_some()
            }
        }
    }

    pub fn apply_action(&self, state: &GameState, action: ActionId) -> Result<StepResult> {
        if !self.is_legal(state, action) {
            return Err(Error::IllegalAction(action));
        }
        let cfg = &self.config;
        let mover = state.mover;
        let mut board = state.board.clone();
        let won = match cfg.rules {
            Rules::ConnectK => {
                let col = action.index();
                let row = (0..cfg.rows)
                    .find(|&r| board[r * cfg.cols + col] == Cell::Empty)
                    .expect("legal column has an empty cell");
                board[row * cfg.cols + col] = mover.cell();
                self.line_through(&board, row, col) >= cfg.k
            }
            Rules::BreakthroughVariant => {
                let from = action.index() / 3;
                let to = self
                    .breakthrough_target(&board, mover, from, action.index() % 3)
                    .expect("legal move has a target");
                board[from] = Cell::Empty;
                board[to] = mover.cell();
                let far_row = if mover == Player::P1 { cfg.rows - 1 } else { 0 };
                let opp = mover.other();
                to / cfg.cols == far_row
                    || !board.contains(&opp.cell())
                    || self.moves_for(&board, opp).is_empty()
            }
        };
        let move_count = state.move_count + 1;
        let outcome = if won {
            Some(Outcome::Win(mover))
        } else if (cfg.rules == Rules::ConnectK && !board.contains(&Cell::Empty))
            || move_count as usize >= cfg.max_moves
        {
            Some(Outcome::Draw)
        } else {
            None
        };
        let rewards = match outcome {
            Some(Outcome::Win(Player::P1)) => [1, -1],
            Some(Outcome::Win(Player::P2)) => [-1, 1],
            _ => [0, 0],
        };
        Ok(StepResult {
            next: GameState {
                board,
                mover: mover.other(),
                move_count,
                outcome,
            },
            terminal: outcome.is_some(),
            rewards,
            probe: self.probe.clone(),
        })
    }

    /// Longest run of same-colored pieces through (row, col).
    fn line_through(&self, board: &[Cell], row: usize, col: usize) -> usize {
        let cfg = &self.config;
        let me = board[row * cfg.cols + col];
        let run = |dr: isize, dc: isize| {
            let mut n = 0;
            let (mut r, mut c) = (row as isize + dr, col as isize + dc);
            while r >= 0
                && r < cfg.rows as isize
                && c >= 0
                && c < cfg.cols as isize
                && board[r as usize * cfg.cols + c as usize] == me
            {
                n += 1;
                r += dr;
                c += dc;
            }
            n
        };
        [(0, 1), (1, 0), (1, 1), (1, -1)]
            .iter()
            .map(|&(dr, dc)| 1 + run(dr, dc) + run(-dr, -dc))
            .max()
            .unwrap_or(1)
    }

    pub fn canonical_key(&self, state: &GameState) -> StateKey {
        let cfg = &self.config;
        let mut v: u128 = 0;
        for (i, &cell) in state.board.iter().enumerate() {
            v |= (cell as u128) << (2 * i);
        }
        if state.mover == Player::P2 {
            v |= 1u128 << (2 * state.board.len());
        }
        v |= (self.config.rules.id() as u128) << 112;
        v |= (cfg.rows as u128) << 116;
        v |= (cfg.cols as u128) << 122;
        StateKey(v)
    }

    /// Rebuilds the position behind a key. The move counter is restored as
    /// the number of pieces placed for connect-k and as 0 for breakthrough.
    pub fn state_from_key(&self, key: StateKey) -> Option<GameState> {
        let cfg = &self.config;
        let v = key.0;
        if (v >> 112) & 0xf != cfg.rules.id() as u128
            || (v >> 116) & 0x3f != cfg.rows as u128
            || (v >> 122) & 0x3f != cfg.cols as u128
        {
            return None;
        }
        let n = cfg.rows * cfg.cols;
        let board = (0..n)
            .map(|i| Cell::from_u8(((v >> (2 * i)) & 3) as u8))
            .collect::<Option<Box<[Cell]>>>()?;
        let mover = if (v >> (2 * n)) & 1 == 1 {
            Player::P2
        } else {
            Player::P1
        };
        let move_count = match cfg.rules {
            Rules::ConnectK => board.iter().filter(|&&c| c != Cell::Empty).count() as u32,
            Rules::BreakthroughVariant => 0,
        };
        let mut state = GameState {
            board,
            mover,
            move_count,
            outcome: None,
        };
        state.outcome = self.classify(&state);
        Some(state)
    }

    /// Terminal status of a position judged from the board alone.
    fn classify(&self, state: &GameState) -> Option<Outcome> {
        let cfg = &self.config;
        let last = state.mover.other();
        match cfg.rules {
            Rules::ConnectK => {
                for p in [Player::P1, Player::P2] {
                    for (i, &cell) in state.board.iter().enumerate() {
                        if cell.owner() == Some(p)
                            && self.line_through(&state.board, i / cfg.cols, i % cfg.cols) >= cfg.k
                        {
                            return Some(Outcome::Win(p));
                        }
                    }
                }
                if !state.board.contains(&Cell::Empty) {
                    return Some(Outcome::Draw);
                }
            }
            Rules::BreakthroughVariant => {
                let far = |p: Player| if p == Player::P1 { cfg.rows - 1 } else { 0 };
                for p in [last, last.other()] {
                    let row = far(p);
                    if (0..cfg.cols).any(|c| state.board[row * cfg.cols + c] == p.cell()) {
                        return Some(Outcome::Win(p));
                    }
                }
                if !state.board.contains(&state.mover.cell())
                    || self.moves_for(&state.board, state.mover).is_empty()
                {
                    return Some(Outcome::Win(last));
                }
            }
        }
        None
    }
}

/// Versioned byte encoding of a state: version, rule id, rows and cols as
/// little-endian u16, one byte per cell in row-major order, the mover
/// (1 or 2) and the move counter as little-endian u32.
pub fn encode_state(config: &GameConfig, state: &GameState) -> Vec<u8> {
    let mut out = Vec::with_capacity(10 + state.board.len());
    out.push(STATE_ENCODING_VERSION);
    out.push(config.rules.id());
    out.extend_from_slice(&(config.rows as u16).to_le_bytes());
    out.extend_from_slice(&(config.cols as u16).to_le_bytes());
    out.extend(state.board.iter().map(|&c| c as u8));
    out.push(state.mover.cell() as u8);
    out.extend_from_slice(&state.move_count.to_le_bytes());
    out
}

/// Inverse of [`encode_state`] for a given game.
pub fn decode_state(game: &Game, bytes: &[u8]) -> Option<GameState> {
    let cfg = game.config();
    let n = cfg.rows * cfg.cols;
    if bytes.len() != 6 + n + 5 || bytes[0] != STATE_ENCODING_VERSION {
        return None;
    }
    if Rules::from_id(bytes[1])? != cfg.rules
        || u16::from_le_bytes([bytes[2], bytes[3]]) as usize != cfg.rows
        || u16::from_le_bytes([bytes[4], bytes[5]]) as usize != cfg.cols
    {
        return None;
    }
    let board = bytes[6..6 + n]
        .iter()
        .map(|&b| Cell::from_u8(b))
        .collect::<Option<Box<[Cell]>>>()?;
    let mover = match bytes[6 + n] {
        1 => Player::P1,
        2 => Player::P2,
        _ => return None,
    };
    let mc = &bytes[7 + n..];
    let move_count = u32::from_le_bytes([mc[0], mc[1], mc[2], mc[3]]);
    let mut state = GameState {
        board,
        mover,
        move_count,
        outcome: None,
    };
    state.outcome = game.classify(&state).or_else(|| {
        (move_count as usize >= cfg.max_moves).then_some(Outcome::Draw)
    });
    Some(state)
}

/// Validates the config and returns its start position.
pub fn new_game(config: &GameConfig) -> Result<GameState> {
    Ok(Game::new(config.clone())?.initial_state())
}
