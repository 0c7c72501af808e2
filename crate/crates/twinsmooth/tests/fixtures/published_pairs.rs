/// One published pair exactly as printed: decimal m, stated bitlength,
/// stated smoothness, stated solution index, and both factorizations.
pub struct PaperPair {
    #[allow(dead_code)]
    pub name: &'static str,
    pub m: &'static str,
    pub bits: u64,
    pub smoothness: u64,
    pub stated_n: u64,
    pub m_factors: &'static [(u64, u32)],
    pub m1_factors: &'static [(u64, u32)],
}

pub const PAIR_245_16759: PaperPair = PaperPair {
    name: "pair-245-16759",
    m: "44746808406030847930450201970587971020922341276429366152081686798603000000",
    bits: 245,
    smoothness: 16759,
    stated_n: 6,
    m_factors: &[(2, 6), (3, 4), (5, 6), (7, 5), (11, 2), (13, 2), (41, 1), (43, 2), (53, 1), (97, 1), (241, 2), (337, 1), (509, 1), (673, 1), (4703, 2), (5981, 1), (9413, 2), (13669, 2), (16759, 2)],
    m1_factors: &[(31, 2), (157, 4), (181, 2), (251, 2), (349, 2), (359, 2), (457, 2), (1427, 2), (2617, 2), (9109, 2), (9649, 2), (10253, 2)],
};

pub const PAIR_260_24551: PaperPair = PaperPair {
    name: "pair-260-24551",
    m: "1248045507865502270977250845951694434798578493856490782548653674169732908101560",
    bits: 260,
    smoothness: 24551,
    stated_n: 6,
    m_factors: &[(2, 3), (3, 5), (5, 1), (7, 2), (17, 1), (19, 1), (29, 1), (31, 1), (43, 2), (53, 2), (149, 2), (211, 2), (227, 2), (233, 1), (827, 1), (919, 2), (2659, 1), (4723, 2), (6907, 2), (10831, 1), (16691, 2), (24551, 1)],
    m1_factors: &[(11, 2), (13, 2), (23, 2), (71, 2), (107, 2), (263, 2), (587, 2), (1021, 2), (4297, 2), (6491, 2), (7309, 2), (8089, 2), (9049, 2), (19009, 2)],
};

pub const PAIR_215_19949: PaperPair = PaperPair {
    name: "pair-215-19949",
    m: "51963397732665557125190357543988479960188331933248699616266017360",
    bits: 215,
    smoothness: 19949,
    stated_n: 1,
    m_factors: &[(2, 4), (3, 5), (5, 1), (7, 1), (11, 2), (647, 1), (911, 1), (919, 2), (1103, 2), (2099, 2), (2203, 2), (2423, 2), (5279, 2), (8641, 2), (19949, 1)],
    m1_factors: &[(19, 2), (23, 2), (47, 2), (277, 2), (359, 2), (419, 2), (541, 2), (887, 2), (1993, 2), (4549, 2), (4813, 2), (12721, 2)],
};

pub const PAIR_273_23603: PaperPair = PaperPair {
    name: "pair-273-23603",
    m: "13751398930221343029252446890555634360426232035770955214339102967231667741706727080",
    bits: 273,
    smoothness: 23603,
    stated_n: 6,
    m_factors: &[(2, 3), (3, 5), (5, 1), (59, 1), (103, 2), (113, 2), (1697, 1), (2381, 1), (2383, 2), (2399, 2), (3623, 2), (4733, 1), (9151, 2), (10607, 2), (16267, 1), (18059, 2), (18289, 1), (23603, 1)],
    m1_factors: &[(11, 4), (17, 2), (53, 2), (83, 2), (109, 2), (227, 2), (263, 2), (347, 2), (373, 2), (599, 2), (2341, 2), (7883, 2), (10223, 2), (10883, 2), (12511, 2)],
};

pub const PAIR_201_29881: PaperPair = PaperPair {
    name: "pair-201-29881",
    m: "2317395102010090979961970844394697249269453177012017537196644",
    bits: 201,
    smoothness: 29881,
    stated_n: 1,
    m_factors: &[(2, 2), (13, 1), (53, 2), (113, 1), (139, 2), (269, 2), (347, 2), (509, 4), (569, 2), (743, 2), (12823, 2), (14149, 1), (29881, 1)],
    m1_factors: &[(3, 9), (5, 1), (23, 2), (43, 2), (167, 2), (179, 2), (227, 1), (349, 2), (613, 2), (661, 2), (2927, 2), (4099, 2), (6421, 2)],
};
