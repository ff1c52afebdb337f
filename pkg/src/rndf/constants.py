"""Reference constants as 200-digit decimal literals."""

TWO_PI_DIGITS = (
    "6.28318530717958647692528676655900576839433879875021164194988918"
    "4615632812572417997256069650684234135964296173026564613294187689"
    "2191011644634507188162569622349005682054038770422111192892458979"
    "0986076393"
)

NAMED_DIGITS = {
    "pi-3": (
        "0.14159265358979323846264338327950288419716939937510582097494459"
        "2307816406286208998628034825342117067982148086513282306647093844"
        "6095505822317253594081284811174502841027019385211055596446229489"
        "5493038196"
    ),
    "sqrt2-1": (
        "0.41421356237309504880168872420969807856967187537694807317667973"
        "7990732478462107038850387534327641572735013846230912297024924836"
        "0558507372126441214970999358314132226659275055927557999505011527"
        "8206057147"
    ),
    "golden-1": (
        "0.61803398874989484820458683436563811772030917980576286213544862"
        "2705260462818902449707207204189391137484754088075386891752126633"
        "8622235369317931800607667263544333890865959395829056383226613199"
        "2829026788"
    ),
}
