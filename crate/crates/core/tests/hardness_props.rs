//! Reduction soundness details beyond the unit tests: witness replay
//! through the scene pipeline and the hand-checked tiny construction.

use occlusion_core::hardness::{
    assignment_to_objects, column_count, reduce, verify_ol_witnesses, SsInstance, FALSE_MARK,
    GREY, ONE, TRUE_MARK, ZERO,
};
use occlusion_core::model::{build_scene, view, Color, ObjectSet, Placement, RoomModel};

#[test]
fn accepted_witnesses_replay_through_the_view_operator() {
    let ss = SsInstance::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 1, 2]]).unwrap();
    let ol = reduce(&ss).unwrap();
    let assignment = [true, false, true];
    assert!(ss.satisfied_by(&assignment));
    let rows = assignment_to_objects(&ss, &assignment).unwrap();
    let witnesses = verify_ol_witnesses(&ol, &rows).expect("satisfying assignment verifies");
    assert_eq!(witnesses.len(), ol.triples.len());

    let set = ObjectSet::new(rows, occlusion_core::hardness::OL_COLORS).unwrap();
    let background = vec![Color::Background; ol.d];
    for (triple, w) in ol.triples.iter().zip(&witnesses) {
        let placements = [
            Placement { object_id: w.front_object, left: w.front_left, depth: 1 },
            Placement { object_id: w.back_object, left: w.back_left, depth: 2 },
        ];
        let scene =
            build_scene(&set, &placements, &background, ol.d, RoomModel::Open).unwrap();
        assert_eq!(view(&scene), triple.image, "witness does not replay");
    }
}

#[test]
fn two_variable_construction_by_hand() {
    // n = 2: one possible clause {0,1}, K = 1, indicator = [0, 1].
    let ss = SsInstance::new(2, vec![vec![0, 1]]).unwrap();
    assert_eq!(column_count(2), 1);
    let objects = assignment_to_objects(&ss, &[true, false]).unwrap();
    // 4 variable objects plus the single grey mask.
    assert_eq!(objects.len(), 5);
    // Variable 0 is true: mirrored indicator capped by T, then F leading
    // the indicator.
    assert_eq!(objects[0], vec![ONE, ZERO, TRUE_MARK]);
    assert_eq!(objects[1], vec![FALSE_MARK, ZERO, ONE]);
    // Variable 1 is false: the marks swap.
    assert_eq!(objects[2], vec![ONE, ZERO, FALSE_MARK]);
    assert_eq!(objects[3], vec![TRUE_MARK, ZERO, ONE]);
    assert_eq!(objects[4], vec![GREY]);

    let ol = reduce(&ss).unwrap();
    assert_eq!(ol.d, 7);
    assert_eq!(ol.n_obj, 5);
    // 4 variable images, 2 set images, no mask images at K = 1.
    assert_eq!(ol.triples.len(), 6);
    assert!(occlusion_core::hardness::verify_ol(&ol, &objects));
}
