//! Long-running programs found by an earlier search, kept as fixtures.
//!
//! All three halt on zero inputs. The listed step counts came from a
//! different lowering and are not expected to match ours exactly.

pub const BB1: &str = "fun f0(ipt: W ^ 4) -> W ^ 1 {
   opt[0] = 4;
   whl opt[0] {
      opt[0] = opt[0] + opt[0];
      scr[3] = opt[0];
      whl opt[0] {
         whl opt[0] {
            scr[7] = scr[2] * 7;
            opt[0] = 0;
            scr[1] = 9
         }
      };
      opt[0] = scr[2] + 0;
      opt[0] = scr[3] + scr[5]
   }
}
";

pub const BB2: &str = "fun f0(ipt: W ^ 2) -> W ^ 1 {
   opt[0] = opt[0] + 6;
   whl opt[0] {
      scr[3] = opt[0] + 0;
      ife ipt[0] { hlt } {
         scr[8] = 6;
         opt[0] = ipt[0] + 3; scr[0] = ipt[1] * 2;
         opt[0] = scr[3] * 6; scr[6] = scr[0] * 3;
         opt[0] = opt[0]
      }
   }
}
";

pub const BB3: &str = "fun f0(ipt: W ^ 3) -> W ^ 1 {
   opt[0] = 1;
   whl opt[0] {
      opt[0] = opt[0] + ipt[0];
      ife ipt[2] { hlt } {
         scr[4] = 6;
         opt[0] = opt[0] + opt[0]
      };
      scr[6] = scr[8] * 2;
      whl ipt[1] { scr[4] = 3; opt[0] = 8 };
      scr[0] = opt[0] + 9
   }
}
";

/// Name, source and the step count reported alongside the listing.
pub const BUSY_BEAVERS: [(&str, &str, u64); 3] = [("BB1", BB1, 1549), ("BB2", BB2, 1272), ("BB3", BB3, 1255)];
