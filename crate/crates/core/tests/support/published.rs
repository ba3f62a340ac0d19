//! Published error tables, `(table, α, p, ‖e‖∞ per h, rate per h after the first)`.
#![allow(clippy::approx_constant)]

pub struct Published {
    pub table: u32,
    pub alpha: f64,
    pub p: usize,
    pub errors: &'static [f64],
    pub rates: &'static [f64],
}

pub const ROWS: &[Published] = &[
    Published { table: 1, alpha: 0.5, p: 0, errors: &[7.5879e-3, 5.3220e-3, 3.7499e-3, 2.6475e-3, 1.8707e-3, 1.3224e-3], rates: &[0.5117, 0.5051, 0.5023, 0.5010, 0.5005] },
    Published { table: 1, alpha: 0.5, p: 1, errors: &[7.8596e-3, 5.4986e-3, 3.8696e-3, 2.7304e-3, 1.9287e-3, 1.3632e-3], rates: &[0.5154, 0.5069, 0.5031, 0.5014, 0.5007] },
    Published { table: 1, alpha: 0.5, p: 2, errors: &[1.3338e-2, 9.3477e-3, 6.5851e-3, 4.6488e-3, 3.2848e-3, 2.3219e-3], rates: &[0.5129, 0.5054, 0.5024, 0.5011, 0.5005] },
    Published { table: 1, alpha: 1.0, p: 0, errors: &[8.1722e-4, 3.8342e-4, 1.8911e-4, 9.4360e-5, 4.7189e-5, 2.3604e-5], rates: &[1.0918, 1.0197, 1.0029, 0.9997, 0.9994] },
    Published { table: 1, alpha: 1.0, p: 1, errors: &[8.1722e-4, 3.8342e-4, 1.8911e-4, 9.4360e-5, 4.7189e-5, 2.3604e-5], rates: &[1.0918, 1.0197, 1.0029, 0.9997, 0.9994] },
    Published { table: 1, alpha: 1.0, p: 2, errors: &[4.7698e-3, 2.3572e-3, 1.1717e-3, 5.8413e-4, 2.9164e-4, 1.4571e-4], rates: &[1.0169, 1.0085, 1.0042, 1.0021, 1.0011] },
    Published { table: 1, alpha: 1.7, p: 0, errors: &[3.6356e-3, 1.8041e-3, 1.2777e-3, 1.0195e-3, 8.3276e-4, 6.8083e-4], rates: &[1.0109, 0.4977, 0.3257, 0.2919, 0.2906] },
    Published { table: 1, alpha: 1.7, p: 1, errors: &[2.5288e-3, 5.4873e-4, 5.8948e-4, 5.0041e-4, 4.0137e-4, 3.2097e-4], rates: &[2.2043, -0.1033, 0.2363, 0.3182, 0.3225] },
    Published { table: 1, alpha: 1.7, p: 2, errors: &[9.9878e-2, 7.8950e-2, 6.3253e-2, 5.1024e-2, 4.1302e-2, 3.3489e-2], rates: &[0.3392, 0.3198, 0.3010, 0.3050, 0.3025] },
    Published { table: 2, alpha: 0.5, p: 0, errors: &[9.7624e-5, 2.8827e-5, 7.6872e-6, 1.9687e-6, 4.9667e-7, 1.2457e-7], rates: &[1.7598, 1.9069, 1.9653, 1.9868, 1.9953] },
    Published { table: 2, alpha: 0.5, p: 1, errors: &[2.1391e-4, 5.9663e-5, 1.5540e-5, 3.9426e-6, 9.9077e-7, 2.4817e-7], rates: &[1.8421, 1.9409, 1.9787, 1.9925, 1.9972] },
    Published { table: 2, alpha: 0.5, p: 2, errors: &[1.0716e-4, 2.4168e-5, 5.5431e-6, 1.2823e-6, 2.9789e-7, 6.9347e-8], rates: &[2.1486, 2.1243, 2.1120, 2.1059, 2.1029] },
    Published { table: 2, alpha: 1.0, p: 0, errors: &[5.9137e-4, 7.5126e-5, 9.4842e-6, 2.0487e-6, 6.4898e-7, 1.7163e-7], rates: &[2.9767, 2.9857, 2.2109, 1.6584, 1.9189] },
    Published { table: 2, alpha: 1.0, p: 1, errors: &[5.9137e-4, 7.5126e-5, 9.4842e-6, 2.0487e-6, 6.4898e-7, 1.7163e-7], rates: &[2.9767, 2.9857, 2.2109, 1.6584, 1.9189] },
    Published { table: 2, alpha: 1.0, p: 2, errors: &[2.4438e-4, 5.4962e-5, 1.2583e-5, 2.9079e-6, 6.7516e-7, 1.5713e-7], rates: &[2.1526, 2.1270, 2.1134, 2.1067, 2.1033] },
    Published { table: 2, alpha: 1.7, p: 0, errors: &[1.4385e-2, 5.3211e-3, 1.5476e-3, 4.0205e-4, 9.9477e-5, 2.4066e-5], rates: &[1.4348, 1.7817, 1.9446, 2.0150, 2.0474] },
    Published { table: 2, alpha: 1.7, p: 1, errors: &[1.5206e-2, 5.5501e-3, 1.6318e-3, 4.2867e-4, 1.0729e-4, 2.6267e-5], rates: &[1.4540, 1.7660, 1.9285, 1.9983, 2.0302] },
    Published { table: 2, alpha: 1.7, p: 2, errors: &[8.0506e-4, 1.0070e-4, 1.6011e-5, 3.1025e-6, 6.6674e-7, 1.4996e-7], rates: &[2.9991, 2.6529, 2.3675, 2.2182, 2.1526] },
    Published { table: 3, alpha: 0.5, p: 0, errors: &[2.0023e-5, 5.4222e-6, 1.3919e-6, 3.5121e-7, 8.8084e-8], rates: &[1.8847, 1.9618, 1.9866, 1.9954] },
    Published { table: 3, alpha: 0.5, p: 1, errors: &[3.0000e-5, 8.3090e-6, 2.1718e-6, 5.5132e-7, 1.3857e-7], rates: &[1.8522, 1.9357, 1.9780, 1.9923] },
    Published { table: 3, alpha: 0.5, p: 2, errors: &[1.7384e-7, 1.2148e-8, 7.8796e-10, 4.9569e-11, 2.6986e-12], rates: &[3.8391, 3.9464, 3.9906, 4.1991] },
    Published { table: 3, alpha: 1.0, p: 0, errors: &[1.1056e-4, 1.7994e-5, 3.2863e-6, 6.6985e-7, 1.4849e-7], rates: &[2.6193, 2.4530, 2.2945, 2.1735] },
    Published { table: 3, alpha: 1.0, p: 1, errors: &[1.1056e-4, 1.7994e-5, 3.2863e-6, 6.6985e-7, 1.4849e-7], rates: &[2.6193, 2.4530, 2.2945, 2.1735] },
    Published { table: 3, alpha: 1.0, p: 2, errors: &[8.0637e-7, 2.5951e-8, 8.3813e-10, 2.7735e-11, 9.3070e-13], rates: &[4.9576, 4.9525, 4.9174, 4.8972] },
    Published { table: 3, alpha: 1.7, p: 0, errors: &[2.2284e-3, 4.6838e-4, 9.8834e-5, 2.0988e-5, 4.4908e-6], rates: &[2.2503, 2.2446, 2.2355, 2.2245] },
    Published { table: 3, alpha: 1.7, p: 1, errors: &[2.3784e-3, 5.1283e-4, 1.1135e-4, 2.4403e-5, 5.4026e-6], rates: &[2.2135, 2.2033, 2.1900, 2.1753] },
    Published { table: 3, alpha: 1.7, p: 2, errors: &[3.1706e-5, 1.6865e-6, 8.9337e-8, 4.7546e-9, 2.6046e-10], rates: &[4.2326, 4.2386, 4.2319, 4.1902] },
    Published { table: 4, alpha: 0.6, p: 0, errors: &[7.4494e-2, 5.9980e-2, 4.8507e-2, 3.9314e-2, 3.1898e-2, 2.5895e-2], rates: &[0.3126, 0.3063, 0.3031, 0.3016, 0.3008] },
    Published { table: 4, alpha: 0.6, p: 1, errors: &[7.5493e-2, 6.0790e-2, 4.9164e-2, 3.9847e-2, 3.2331e-2, 2.6247e-2], rates: &[0.3125, 0.3062, 0.3031, 0.3016, 0.3008] },
    Published { table: 4, alpha: 0.6, p: 2, errors: &[8.4532e-2, 6.8106e-2, 5.5102e-2, 4.4671e-2, 3.6249e-2, 2.9429e-2], rates: &[0.3117, 0.3057, 0.3028, 0.3014, 0.3007] },
    Published { table: 4, alpha: 1.0, p: 0, errors: &[4.9166e-2, 3.4508e-2, 2.4310e-2, 1.7158e-2, 1.2121e-2, 8.5671e-3], rates: &[0.5107, 0.5054, 0.5027, 0.5013, 0.5007] },
    Published { table: 4, alpha: 1.0, p: 1, errors: &[4.9166e-2, 3.4508e-2, 2.4310e-2, 1.7158e-2, 1.2121e-2, 8.5671e-3], rates: &[0.5107, 0.5054, 0.5027, 0.5013, 0.5007] },
    Published { table: 4, alpha: 1.0, p: 2, errors: &[5.7935e-2, 4.0695e-2, 2.8682e-2, 2.0248e-2, 1.4306e-2, 1.0112e-2], rates: &[0.5096, 0.5047, 0.5023, 0.5012, 0.5006] },
    Published { table: 4, alpha: 1.5, p: 0, errors: &[1.6161e-2, 9.5429e-3, 5.6545e-3, 3.3563e-3, 1.9939e-3, 1.1851e-3], rates: &[0.7600, 0.7550, 0.7525, 0.7513, 0.7506] },
    Published { table: 4, alpha: 1.5, p: 1, errors: &[1.5976e-2, 9.4344e-3, 5.5905e-3, 3.3184e-3, 1.9714e-3, 1.1717e-3], rates: &[0.7599, 0.7550, 0.7525, 0.7513, 0.7506] },
    Published { table: 4, alpha: 1.5, p: 2, errors: &[2.2627e-2, 1.3365e-2, 7.9205e-3, 4.7018e-3, 2.7934e-3, 1.6603e-3], rates: &[0.7596, 0.7548, 0.7524, 0.7512, 0.7506] },
    Published { table: 5, alpha: 0.2, p: 1, errors: &[5.3181e-4, 1.1946e-4, 2.8883e-5, 7.1505e-6, 1.7827e-6, 4.4531e-7], rates: &[2.1544, 2.0482, 2.0141, 2.0040, 2.0011] },
    Published { table: 5, alpha: 0.7, p: 1, errors: &[2.3855e-3, 5.1805e-4, 1.2151e-4, 2.9565e-5, 7.3092e-6, 1.8190e-6], rates: &[2.2031, 2.0921, 2.0391, 2.0161, 2.0065] },
    Published { table: 5, alpha: 1.0, p: 1, errors: &[3.9406e-3, 8.3747e-4, 1.9083e-4, 4.5384e-5, 1.1056e-5, 2.7276e-6], rates: &[2.2343, 2.1338, 2.0720, 2.0374, 2.0191] },
    Published { table: 5, alpha: 1.4, p: 1, errors: &[6.9983e-3, 1.4880e-3, 3.2910e-4, 7.5175e-5, 1.7618e-5, 4.2102e-6], rates: &[2.2337, 2.1767, 2.1302, 2.0932, 2.0651] },
    Published { table: 5, alpha: 1.9, p: 1, errors: &[1.4264e-2, 3.3824e-3, 8.0943e-4, 1.9424e-4, 4.6676e-5, 1.1230e-5], rates: &[2.0762, 2.0631, 2.0591, 2.0571, 2.0554] },
];
