/// Small finite groups with their orders.
pub const SMALL_GROUPS: &[(&str, u64)] = &[
    ("a | a", 1),
    ("a | a^5", 5),
    ("a b | a^2, b^2, a*b*a^-1*b^-1", 4),
    ("a b | a^2, b^3, (a*b)^2", 6),
    ("a b | a^4, b^2, (a*b)^2", 8),
    ("a b | a^4, a^2*b^-2, b^-1*a*b*a", 8),
    ("a b | a^3, b^3, (a*b)^2", 12),
    ("a b | a^2, b^3, (a*b)^4", 24),
    ("a b | a^2, b^3, (a*b)^5", 60),
    ("a b c | a^2, b^2, c^2, (a*b)^3, (b*c)^3, (a*c)^2", 24),
    ("a b | a^8, b^2, b*a*b^-1*a^-3", 16),
];
