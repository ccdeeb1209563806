use thiserror::Error;

/// Errors raised by geometric constructions.
///
/// Every failure mode corresponds to a degenerate input configuration; the
/// kernel itself never panics on finite input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("linear sphere complex is parabolic (lightlike), inversion undefined")]
    ParabolicComplex,
    #[error("sphere pair is degenerate, no complex maps one to the other")]
    DegeneratePair,
    #[error("four spheres admit no linear relation s1 - s2 + s3 - s4 = 0")]
    NoLinearRelation,
    #[error("spheres are in oriented contact, inversion construction undefined")]
    ContactViolation,
    #[error("argument is a point sphere")]
    PointSphereArgument,
    #[error("spheres do not intersect, no real angle")]
    NonIntersecting,
    #[error("span contains no real sphere direction")]
    NoRealSpheres,
    #[error("point sphere does not lie on the sphere")]
    NotOnSphere,
    #[error("point spheres coincide")]
    CoincidentPoints,
    #[error("span is degenerate, expected signature not met")]
    DegenerateSpan,
    #[error("contact elements share no common sphere")]
    NoCommonSphere,
    #[error("degenerate input, contact elements coincide")]
    DegenerateInput,
    #[error("spheres span a degenerate pencil with the point sphere complex")]
    DegeneratePencil,
    #[error("pencil contains no sphere at this parameter")]
    NoSphereAtParameter,
    #[error("vector is not lightlike")]
    NotLightlike,
    #[error("family is a circle: every member is a point sphere")]
    CircleFamily,
    #[error("curvature sphere at this parameter is singular (a point sphere)")]
    SingularParameter,
    #[error("parameter coincides with the base parameter of the evolution")]
    BaseParameter,
    #[error("circle is not the curvature circle of the base sphere")]
    NotCurvatureCircle,
    #[error("derivative of the curvature sphere family is not spacelike")]
    NonSpacelikeDerivative,
    #[error("sphere is not orthogonal to the base pencil sphere")]
    NotOrthogonal,
    #[error("parameter lies outside the admissible evolution interval")]
    OutsideJStar,
    #[error("circle does not lie on the base pencil sphere")]
    CircleNotOnSphere,
    #[error("contact elements share no common curvature sphere")]
    NoCommonCurvatureSphere,
    #[error("circle meets the cyclide in four points, not two")]
    FourPointIntersection,
    #[error("complex is proportional to the point sphere complex")]
    PointSphereComplexArgument,
    #[error("evolution direction is null at this parameter")]
    NullDirection,
    #[error("torus radii are degenerate (need spine > tube > 0)")]
    DegenerateTorus,
    #[error("no curvature sphere bisects the patch")]
    NoMidpointSphere,
    #[error("midpoint curvature spheres coincide (double root)")]
    DoubleRoot,
    #[error("the two curvature spheres coincide")]
    SameSphere,
    #[error("box parameters hit a singular value")]
    SingularBox,
    #[error("inversion does not fix the point sphere complex")]
    NotMLie,
    #[error("circle does not lie on the base quer-sphere")]
    NotOnQuerSphere,
    #[error("circle is not orthogonal to the base curvature circle")]
    NotOrthogonalToBaseCircle,
    #[error("space form chart is not Euclidean, check unsupported")]
    UnsupportedChart,
    #[error("vector is zero or non-finite")]
    InvalidVector,
}

pub type Result<T> = std::result::Result<T, GeomError>;
