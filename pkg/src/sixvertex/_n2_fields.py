"""Closed-form sector n=2 generator components for the rational model.

Machine-transcribed expressions; each generator is in the minimal form
xi = f0(x), phi = g0(x) + g1(x) Lambda.  Arguments may be Jets (x and the
lambda values at x) so derivatives come for free; u, LP_u, LM_u are the zero
u1 and lambda_+(u1), lambda_-(u1).  Generated with common-subexpression
elimination; do not edit by hand.
"""


def n2_components(x, u, LP_x, LM_x, LPd_x, LMd_x, LP_u, LM_u):
    """Return {"H": (f0, g0, g1), "+": (...), "-": (...)}."""
    t0 = LM_u + LP_u*u
    t1 = 1/t0
    t2 = 2*u
    t3 = 2*x
    t4 = -t3
    t5 = t2 + t4
    t6 = x**2
    t7 = t6 + 1
    t8 = u**2
    t9 = t3*u
    t10 = -t9
    t11 = t10 + t8
    t12 = t11 + t7
    t13 = LP_u*t12
    t14 = 1/(LM_u*t5 + t13)
    t15 = -x
    t16 = t15 + u
    t17 = -t16
    t18 = t15 + t2
    t19 = -t18
    t20 = u*x
    t21 = t8 + 1
    t22 = -t20 + t21
    t23 = LM_u*t19 - LP_u*t22
    t24 = u**3
    t25 = 4*t24
    t26 = t6*u
    t27 = 12*x
    t28 = t27*t8
    t29 = LM_x**2
    t30 = t6 + 2
    t31 = x**3
    t32 = -t31
    t33 = 3*u - 3*x
    t34 = LP_x*t16
    t35 = LMd_x*t34*x
    t36 = t16**2
    t37 = -6*t20
    t38 = 5*t8
    t39 = t6 + 3
    t40 = LPd_x*x
    t41 = 18*t6
    t42 = 8*t6
    t43 = 5*t6
    t44 = x**4
    t45 = t43 + t44
    t46 = t45 + 2
    t47 = 16*t24
    t48 = -t47*x
    t49 = u**4
    t50 = 5*t49
    t51 = t48 + t50
    t52 = LM_u*LP_u**2
    t53 = 2*t52
    t54 = t30*t8
    t55 = t24*t3
    t56 = 1 - t6
    t57 = LP_x**2
    t58 = t16 + t24
    t59 = t3*t8
    t60 = t16**3
    t61 = t22*x
    t62 = 6*t6
    t63 = 4*x
    t64 = u**5
    t65 = t4 - t49*t63 + t64
    t66 = LP_u**3
    t67 = 2*t66
    t68 = -t5
    t69 = LP_x*t5
    t70 = t18*x
    t71 = 4*t6
    t72 = t71 + 1
    t73 = -10*t20 + t38
    t74 = t72 + t73
    t75 = 14*t6
    t76 = t75 + 2
    t77 = 3*t6
    t78 = t77 + 2
    t79 = 8*t24
    t80 = t79 - 19*t8*x
    t81 = LP_x*x
    t82 = 4*t20
    t83 = 2*t6
    t84 = 4*t8
    t85 = t83 + t84
    t86 = 2*t8
    t87 = t6 + t86
    t88 = t10 + t87
    t89 = -3*t20 + t87
    t90 = 2*LM_x
    t91 = LM_u**3
    t92 = LP_u*t91
    t93 = -t79
    t94 = 4*t31
    t95 = t8*x
    t96 = 18*t95
    t97 = 7*t6
    t98 = 14*t26
    t99 = LM_u**2
    t100 = 2*t99
    t101 = -LP_x
    t102 = 1/(LM_u*(LM_x*t5 + t101) + LP_u*(LM_x*t12 + LP_x*t17))
    t103 = t102*t14
    t104 = t1*t103
    t105 = t44 + t72
    t106 = t83 + 3
    t107 = LMd_x*t12 + LPd_x*t17
    t108 = 2 - 8*t20
    t109 = t105 + t51 + t8*(t41 + 6)
    t110 = LMd_x*t5 - LPd_x
    t111 = t83 + 1
    t112 = t111 - 7*t20 + t38
    t113 = 3*x
    t114 = (LM_u*t2 + LP_u*t21)**2
    t115 = 1/t114
    t116 = LMd_x*LP_x
    t117 = t116*t83
    t118 = t62 + 1
    t119 = t3 + t94
    t120 = LPd_x*t6
    t121 = t22**2
    t122 = t121*t6
    t123 = t116*t36
    t124 = u**6
    t125 = 2*t44
    t126 = t125 + 10*t6 + 3
    t127 = 11*t6
    t128 = 6*x
    t129 = -t128*t64
    t130 = t45 + 1
    t131 = t62 + 7
    t132 = t42 + t44
    t133 = t132 + 7
    t134 = 2*t24
    t135 = 20*t6
    t136 = 3*t44 + 1
    t137 = 12*t49
    t138 = t83*(t6 + 6)
    t139 = 32*x
    t140 = t6 + 4
    t141 = t137 - t139*t24 + t140*t6 + t8*(29*t6 + 8) - t9*(t43 + 6)
    t142 = 24*t49
    t143 = 30*t6
    t144 = LP_u*t99
    t145 = 6*t64
    t146 = t49*x
    t147 = 10*t146
    t148 = 12*t6
    t149 = -t106*t113*t8 - t147 + t24*(t148 + 4) + 3*t64 - t7*x + u*(t118 + t44)
    t150 = t103*t115
    t151 = LM_x*t3
    t152 = 6*t24
    t153 = t148 + 6
    t154 = t114/t0**2
    t155 = -t57
    t156 = 2*LP_x
    t157 = t102*t154/(2*LM_u*t16 + t13)
    t158 = t16*t90
    t159 = -t33
    f0_H = t1*t14*t23*t3*(-LM_u + LP_u*t17)
    g0_H = t104*(t100*(LM_x*(-LP_x*(-t63 - t93 - t94 - t96 + 2*u*(t97 + 3)) + LPd_x*x*(3*t31 - t5 - t80 - t98)) - LMd_x*t69*t70 - LMd_x*t81*(-t76*u + t78*x - t80) + t57*t68 + t57*t74 - t92*(t29*(-t82 + t85) + t90*(LP_x*t88 + t40*t89))) + t53*(LM_x*(LP_x*(-t20*(t42 + 16) + t46 + t51 + t8*(t41 + 9)) + t36*t40*(t37 + t38 + t39)) - t2 - t25 - 10*t26 + t28 + t29*(-t2*t30 - t25 - t4 + 6*t8*x) + t3*t7 + t35*(-5*t24 - 7*t26 - t32 - t33 + 11*t8*x)) - t67*(LM_x*(-LP_x*(t24*(t62 + 3) + t46*u - t54*t63 + t65) - LPd_x*t60*t61) - t16*(-t35*(t26 + t58 - t59) + t57*(-t2*t6 - t58 + 3*t8*x)) + t29*(t10 + t49 + t54 - t55 + t56)))
    g1_H = t104*(t100*(LM_x*(t4 + t79 - t94 - t96 + t98 + 4*u) - LP_x*t74 + t110*t70 + t69 + t88*t90*t92 + x*(LMd_x*(t113 + 3*t31 + t93 + 19*t95 - u*(t75 + 4)) + LPd_x*t112)) + t53*(LM_x*(-t109 + u*x*(t42 + 12)) - t34*(-t108 - t85) + x*(LMd_x*(t109 - t20*(t42 + 10)) + LPd_x*(-t25 - t32 - t5 - t62*u + 9*t8*x))) - t67*(LM_x*(t105*u - t106*t59 + t24*(t62 + 2) + t65) - t16*(t107*t22*x - t34*(-t10 - t21))))
    f0_P = t115*t14*t23**2*t6
    g0_P = t150*(t144*(LM_x*(LP_x*(-t134*(32*t6 + 8) + t142*x - t2*(t143 + 11*t44 + 4) + t3*(t132 + 4) + t86*(t139 + 30*t31)) + t120*t141) - t116*t141*t6 + t29*(t137 + t138 - t2*(t27 + 12*t31) - 48*t24*x + t86*(28*t6 + 6)) + t57*(t136 - t20*(t135 + 14) + t48 + t8*(34*t6 + 5) + t97)) + t52*(-t117*t149 + t29*(-t106*t28 + t126*t2 - t128 + t134*(22*t6 + 6) + t145 - 30*t146) - t57*(t119 + t128*t8*(t71 + 3) - t134*t76 + t147 - t2*(t136 + 9*t6)) + t90*(LP_x*(-t129 - t130 + 4*t131*t24*x + 2*t133*u*x - t49*(t135 + 5) - t8*(12*t44 + 39*t6 + 6)) + t120*t149)) + t66*(LM_x*(LP_x*(t124*t3 - t130*t2 + t131*t3*t49 + t133*t59 - t134*(4*t44 + 13*t6 + 2) + t3 - 2*t64*t72) + t120*t121*t36) - t122*t123 + t29*(-t106*t24*t63 + t124 + t126*t8 + t129 + t37 + t49*(t127 + 3) + t56) - t36*t57*(t55 - t8*(t77 + 1) + t82 - 1)) + t91*(t117*t19*t89 + 8*t29*t60 - t57*(-t118*t2 + t119 + 8*t95) + t90*(LP_x*(-t6*(t77 + 4) + t78*t82 + t79*x - t8*(16*t6 + 4)) + t120*t18*t89)))
    g1_P = t150*(t144*(LM_x*x*(-t138 - t142 + 64*t24*x - t86*(t143 + 12) + 2*u*x*(t127 + 16)) + t18*t6*(LMd_x*(t152 - 13*t95 + u*(t42 + 6) - x*(t6 + 5)) - LPd_x*(-5*t20 + t30 + t84)) - t81*(3*t30*x - t47 + 34*t8*x - u*(t135 + 8))) + t52*(-LP_x*t3*(-t111 - t153*t8 + 14*t24*x - t50 + u*x*(t77 + 8)) + t151*(t140*x - t145 - t24*(24*t6 + 12) + 12*t30*t8*x + 20*t49*x - u*(t125 + t153)) - t22*t6*(-LMd_x*(t152 + t2*(t43 + 3) - t3*t30 - 14*t95) + LPd_x*t112)) + t66*(LM_x*t61*(6*t24*x + 2*t39*u*x - 2*t49 - t78*t86 - 2) - LP_x*t61*(-t134 - t15 - t78*u + 5*t8*x) + t107*t122) + t91*(LP_x*t63*t89 + t110*t19**2*t6 + t151*t18*(-t37 - t77 - t84)))
    f0_M = -t14*t154*(LM_u + LP_u*t16)**2
    g0_M = -t157*(t144*(LM_x*t16*(LPd_x*(5*u - 5*x) + t156) - 5*t123 - t155 - 2*t29) + t52*(t16*(-4*t123 + 2*t57) - t29*t5 + t90*(-LP_x + 2*LPd_x*t60)) + t66*(LM_x*t16*(LPd_x*t60 - t156) - t29*(t11 + t6 - 1) + t36*(-t123 - t155)) + t91*(LMd_x*LP_x*t68 - t90*(-LP_x + LPd_x*t17)))
    g1_M = -t157*(t144*(LMd_x*(t43 + t73 + 1) - LP_x + LPd_x*t159 - t158) + t52*(t16*(LMd_x*(t108 + t71 + t84) + LPd_x*t159 - t156) + t90) + t66*(t158 + t36*(t101 + t107)) + t91*(-LMd_x*t68 - LPd_x - t90))
    return {"H": (f0_H, g0_H, g1_H), "+": (f0_P, g0_P, g1_P), "-": (f0_M, g0_M, g1_M)}
