"""Tabulated symmetric simplex rules: {(dim, degree): (barycentric points, weights)}.

Generated by ``tools/make_quadrature.py``; weights sum to ``1 / dim!``.
"""
RULES = {
    (2, 1): (
        [
            [0.3333333333333333, 0.3333333333333333, 0.3333333333333333],
        ],
        [0.5],
    ),
    (2, 2): (
        [
            [0.16666666666666669, 0.16666666666666669, 0.6666666666666666],
            [0.16666666666666669, 0.6666666666666666, 0.16666666666666669],
            [0.6666666666666666, 0.16666666666666669, 0.16666666666666669],
        ],
        [0.16666666666666666, 0.16666666666666666, 0.16666666666666666],
    ),
    (2, 4): (
        [
            [0.0915762135097707, 0.0915762135097707, 0.8168475729804586],
            [0.0915762135097707, 0.8168475729804586, 0.0915762135097707],
            [0.8168475729804586, 0.0915762135097707, 0.0915762135097707],
            [0.10810301816807022, 0.4459484909159649, 0.4459484909159649],
            [0.4459484909159649, 0.10810301816807022, 0.4459484909159649],
            [0.4459484909159649, 0.4459484909159649, 0.10810301816807022],
        ],
        [0.05497587182766092, 0.05497587182766092, 0.05497587182766092, 0.11169079483900575, 0.11169079483900575, 0.11169079483900575],
    ),
    (2, 5): (
        [
            [0.3333333333333333, 0.3333333333333333, 0.3333333333333333],
            [0.059715871789769004, 0.4701420641051155, 0.4701420641051155],
            [0.4701420641051155, 0.059715871789769004, 0.4701420641051155],
            [0.4701420641051155, 0.4701420641051155, 0.059715871789769004],
            [0.10128650732345638, 0.10128650732345638, 0.7974269853530872],
            [0.10128650732345638, 0.7974269853530872, 0.10128650732345638],
            [0.7974269853530872, 0.10128650732345638, 0.10128650732345638],
        ],
        [0.11250000000000102, 0.0661970763942527, 0.0661970763942527, 0.0661970763942527, 0.06296959027241363, 0.06296959027241363, 0.06296959027241363],
    ),
    (2, 6): (
        [
            [0.06308901449150149, 0.06308901449150149, 0.873821971016997],
            [0.06308901449150149, 0.873821971016997, 0.06308901449150149],
            [0.873821971016997, 0.06308901449150149, 0.06308901449150149],
            [0.2492867451709142, 0.2492867451709142, 0.5014265096581716],
            [0.2492867451709142, 0.5014265096581716, 0.2492867451709142],
            [0.5014265096581716, 0.2492867451709142, 0.2492867451709142],
            [0.053145049844819464, 0.3103524510337815, 0.636502499121399],
            [0.053145049844819464, 0.636502499121399, 0.3103524510337815],
            [0.3103524510337815, 0.053145049844819464, 0.636502499121399],
            [0.3103524510337815, 0.636502499121399, 0.053145049844819464],
            [0.636502499121399, 0.053145049844819464, 0.3103524510337815],
            [0.636502499121399, 0.3103524510337815, 0.053145049844819464],
        ],
        [0.02542245318510286, 0.02542245318510286, 0.02542245318510286, 0.05839313786318662, 0.05839313786318662, 0.05839313786318662, 0.041425537809188596, 0.041425537809188596, 0.041425537809188596, 0.041425537809188596, 0.041425537809188596, 0.041425537809188596],
    ),
    (2, 8): (
        [
            [0.3333333333333333, 0.3333333333333333, 0.3333333333333333],
            [0.0505472283170312, 0.0505472283170312, 0.8989055433659376],
            [0.0505472283170312, 0.8989055433659376, 0.0505472283170312],
            [0.8989055433659376, 0.0505472283170312, 0.0505472283170312],
            [0.08141482341455153, 0.45929258829272424, 0.45929258829272424],
            [0.45929258829272424, 0.08141482341455153, 0.45929258829272424],
            [0.45929258829272424, 0.45929258829272424, 0.08141482341455153],
            [0.17056930775176204, 0.17056930775176204, 0.6588613844964759],
            [0.17056930775176204, 0.6588613844964759, 0.17056930775176204],
            [0.6588613844964759, 0.17056930775176204, 0.17056930775176204],
            [0.008394777409959305, 0.2631128296346345, 0.7284923929554061],
            [0.008394777409959305, 0.7284923929554061, 0.2631128296346345],
            [0.2631128296346345, 0.008394777409959305, 0.7284923929554061],
            [0.2631128296346345, 0.7284923929554061, 0.008394777409959305],
            [0.7284923929554061, 0.008394777409959305, 0.2631128296346345],
            [0.7284923929554061, 0.2631128296346345, 0.008394777409959305],
        ],
        [0.07215780383889392, 0.016229248811599102, 0.016229248811599102, 0.016229248811599102, 0.04754581713364171, 0.04754581713364171, 0.04754581713364171, 0.051608685267359025, 0.051608685267359025, 0.051608685267359025, 0.013615157087217758, 0.013615157087217758, 0.013615157087217758, 0.013615157087217758, 0.013615157087217758, 0.013615157087217758],
    ),
    (3, 1): (
        [
            [0.25, 0.25, 0.25, 0.25],
        ],
        [0.16666666666666666],
    ),
    (3, 2): (
        [
            [0.1381966011250105, 0.1381966011250105, 0.1381966011250105, 0.5854101966249685],
            [0.1381966011250105, 0.1381966011250105, 0.5854101966249685, 0.1381966011250105],
            [0.1381966011250105, 0.5854101966249685, 0.1381966011250105, 0.1381966011250105],
            [0.5854101966249685, 0.1381966011250105, 0.1381966011250105, 0.1381966011250105],
        ],
        [0.041666666666666664, 0.041666666666666664, 0.041666666666666664, 0.041666666666666664],
    ),
    (3, 3): (
        [
            [0.12427303487293703, 0.12427303487293703, 0.12427303487293703, 0.6271808953811889],
            [0.12427303487293703, 0.12427303487293703, 0.6271808953811889, 0.12427303487293703],
            [0.12427303487293703, 0.6271808953811889, 0.12427303487293703, 0.12427303487293703],
            [0.6271808953811889, 0.12427303487293703, 0.12427303487293703, 0.12427303487293703],
            [0.0013946928541381798, 0.3328684357152873, 0.3328684357152873, 0.3328684357152873],
            [0.3328684357152873, 0.0013946928541381798, 0.3328684357152873, 0.3328684357152873],
            [0.3328684357152873, 0.3328684357152873, 0.0013946928541381798, 0.3328684357152873],
            [0.3328684357152873, 0.3328684357152873, 0.3328684357152873, 0.0013946928541381798],
        ],
        [0.026252630123618465, 0.026252630123618465, 0.026252630123618465, 0.026252630123618465, 0.015414036543048201, 0.015414036543048201, 0.015414036543048201, 0.015414036543048201],
    ),
    (3, 5): (
        [
            [0.06734224221009821, 0.3108859192633006, 0.3108859192633006, 0.3108859192633006],
            [0.3108859192633006, 0.06734224221009821, 0.3108859192633006, 0.3108859192633006],
            [0.3108859192633006, 0.3108859192633006, 0.06734224221009821, 0.3108859192633006],
            [0.3108859192633006, 0.3108859192633006, 0.3108859192633006, 0.06734224221009821],
            [0.09273525031089119, 0.09273525031089119, 0.09273525031089119, 0.7217942490673264],
            [0.09273525031089119, 0.09273525031089119, 0.7217942490673264, 0.09273525031089119],
            [0.09273525031089119, 0.7217942490673264, 0.09273525031089119, 0.09273525031089119],
            [0.7217942490673264, 0.09273525031089119, 0.09273525031089119, 0.09273525031089119],
            [0.04550370412564986, 0.04550370412564986, 0.45449629587435014, 0.45449629587435014],
            [0.04550370412564986, 0.45449629587435014, 0.04550370412564986, 0.45449629587435014],
            [0.04550370412564986, 0.45449629587435014, 0.45449629587435014, 0.04550370412564986],
            [0.45449629587435014, 0.04550370412564986, 0.04550370412564986, 0.45449629587435014],
            [0.45449629587435014, 0.04550370412564986, 0.45449629587435014, 0.04550370412564986],
            [0.45449629587435014, 0.45449629587435014, 0.04550370412564986, 0.04550370412564986],
        ],
        [0.018781320953002608, 0.018781320953002608, 0.018781320953002608, 0.018781320953002608, 0.012248840519393647, 0.012248840519393647, 0.012248840519393647, 0.012248840519393647, 0.00709100346284694, 0.00709100346284694, 0.00709100346284694, 0.00709100346284694, 0.00709100346284694, 0.00709100346284694],
    ),
    (3, 6): (
        [
            [0.032986329573173045, 0.32233789014227565, 0.32233789014227565, 0.32233789014227565],
            [0.32233789014227565, 0.032986329573173045, 0.32233789014227565, 0.32233789014227565],
            [0.32233789014227565, 0.32233789014227565, 0.032986329573173045, 0.32233789014227565],
            [0.32233789014227565, 0.32233789014227565, 0.32233789014227565, 0.032986329573173045],
            [0.04067395853461126, 0.04067395853461126, 0.04067395853461126, 0.8779781243961662],
            [0.04067395853461126, 0.04067395853461126, 0.8779781243961662, 0.04067395853461126],
            [0.04067395853461126, 0.8779781243961662, 0.04067395853461126, 0.04067395853461126],
            [0.8779781243961662, 0.04067395853461126, 0.04067395853461126, 0.04067395853461126],
            [0.21460287125915106, 0.21460287125915106, 0.21460287125915106, 0.35619138622254676],
            [0.21460287125915106, 0.21460287125915106, 0.35619138622254676, 0.21460287125915106],
            [0.21460287125915106, 0.35619138622254676, 0.21460287125915106, 0.21460287125915106],
            [0.35619138622254676, 0.21460287125915106, 0.21460287125915106, 0.21460287125915106],
            [0.06366100187501744, 0.06366100187501744, 0.2696723314583158, 0.6030056647916493],
            [0.06366100187501744, 0.06366100187501744, 0.6030056647916493, 0.2696723314583158],
            [0.06366100187501744, 0.2696723314583158, 0.06366100187501744, 0.6030056647916493],
            [0.06366100187501744, 0.2696723314583158, 0.6030056647916493, 0.06366100187501744],
            [0.06366100187501744, 0.6030056647916493, 0.06366100187501744, 0.2696723314583158],
            [0.06366100187501744, 0.6030056647916493, 0.2696723314583158, 0.06366100187501744],
            [0.2696723314583158, 0.06366100187501744, 0.06366100187501744, 0.6030056647916493],
            [0.2696723314583158, 0.06366100187501744, 0.6030056647916493, 0.06366100187501744],
            [0.2696723314583158, 0.6030056647916493, 0.06366100187501744, 0.06366100187501744],
            [0.6030056647916493, 0.06366100187501744, 0.06366100187501744, 0.2696723314583158],
            [0.6030056647916493, 0.06366100187501744, 0.2696723314583158, 0.06366100187501744],
            [0.6030056647916493, 0.2696723314583158, 0.06366100187501744, 0.06366100187501744],
        ],
        [0.009226196923942392, 0.009226196923942392, 0.009226196923942392, 0.009226196923942392, 0.001679535175886769, 0.001679535175886769, 0.001679535175886769, 0.001679535175886769, 0.0066537917096946885, 0.0066537917096946885, 0.0066537917096946885, 0.0066537917096946885, 0.008035714285714273, 0.008035714285714273, 0.008035714285714273, 0.008035714285714273, 0.008035714285714273, 0.008035714285714273, 0.008035714285714273, 0.008035714285714273, 0.008035714285714273, 0.008035714285714273, 0.008035714285714273, 0.008035714285714273],
    ),
}
