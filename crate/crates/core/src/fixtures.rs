//! The small running-example model used throughout tests and documentation.

use crate::model::{Partitioning, TopModel};
use crate::time::{Period, Point, Timeline};

/// Speech time of [`m0`].
pub const M0_SPEECH: Point = 7;

/// [`m0`] in model-file syntax.
pub const M0_TEXT: &str = "\
# tank, construction and inspection example
timeline 10
speech 7
object tank5
object housecorp
object bridge2
object jadams
object ba737
periodconst d_jan = [3,4]
periodconst y1997 = [0,6]
pred empty/1
maximal empty(tank5) = [2,5]
pred building/2
maximal building(housecorp, bridge2) = [1,2] [4,5]
culm building(housecorp, bridge2) = true
pred inspecting/2
maximal inspecting(jadams, ba737) = [0,1]
culm inspecting(jadams, ba737) = true
cpart minute = blocks 1
gpart fivepm = [3,3] [7,7]
";

fn per(lo: Point, hi: Point) -> Period {
    Period::new(lo, hi).expect("fixture period")
}

/// Ten points; tank5 empty over `[2,5]`; `d_jan` denotes `[3,4]`; housecorp
/// built bridge2 over `[1,2]` and `[4,5]` and completed it.
pub fn m0() -> TopModel {
    let tl = Timeline::new(10).expect("fixture timeline");
    let mut m = TopModel::new(tl);
    let tank5 = m.frame.add_atom("tank5");
    let housecorp = m.frame.add_atom("housecorp");
    let bridge2 = m.frame.add_atom("bridge2");
    let jadams = m.frame.add_atom("jadams");
    let ba737 = m.frame.add_atom("ba737");
    m.frame.consts.insert("d_jan".into(), crate::Obj::Period(per(3, 4)));
    m.frame.consts.insert("y1997".into(), crate::Obj::Period(per(0, 6)));

    let empty = m.declare_pred("empty", 1);
    m.add_maximal(&empty, vec![tank5], per(2, 5));

    let building = m.declare_pred("building", 2);
    m.add_maximal(&building, vec![housecorp, bridge2], per(1, 2));
    m.add_maximal(&building, vec![housecorp, bridge2], per(4, 5));
    m.set_culm(&building, vec![housecorp, bridge2]);

    let inspecting = m.declare_pred("inspecting", 2);
    m.add_maximal(&inspecting, vec![jadams, ba737], per(0, 1));
    m.set_culm(&inspecting, vec![jadams, ba737]);

    m.frame.cparts.insert("minute".into(), Partitioning::uniform(&tl, 1));
    m.frame.gparts.insert("fivepm".into(), Partitioning::gappy(vec![per(3, 3), per(7, 7)]));
    m
}
