//! Reference smooth-relation lists and the 3-qubit parity table.

/// `(u, v, |u − vN|)` as reference factorizations.
pub const THREE_QUBIT_PAIRS: [(&str, &str, &str); 20] = [
    ("2^3 * 3^5", "1", "17"),
    ("2^4 * 5^3", "1", "3 * 13"),
    ("2^7 * 3 * 5", "1", "41"),
    ("3^4 * 5^2", "1", "2^6"),
    ("3 * 5^4", "1", "2 * 43"),
    ("2^3 * 3^2 * 5^2", "1", "7 * 23"),
    ("2 * 3^2 * 5^3", "1", "17^2"),
    ("2^2 * 3^4 * 5", "1", "11 * 31"),
    ("2^6 * 5^2", "1", "19^2"),
    ("2^2 * 5^4", "1", "7^2 * 11"),
    ("2 * 3^3 * 5^2", "1", "13 * 47"),
    ("2^4 * 3^4", "1", "5 * 7 * 19"),
    ("3^2 * 5^3", "1", "2^2 * 11 * 19"),
    ("2^3 * 5^3", "1", "31^2"),
    ("2^2 * 3^5", "1", "23 * 43"),
    ("2^5 * 5^2", "1", "3^3 * 43"),
    ("2^4 * 3^6", "5", "11 * 13^2"),
    ("2^4 * 3^5", "1", "41 * 47"),
    ("3^5 * 5^2", "1", "2 * 11^2 * 17"),
    ("3 * 5^5", "2", "7 * 19 * 41"),
];

pub const FIVE_QUBIT_PAIRS: [(&str, &str, &str); 55] = [
    ("5^6 * 7 * 11^3", "3", "2^2 * 17 * 23 * 79"),
    ("5^11", "1", "2 * 3 * 11 * 59 * 67"),
    ("3^3 * 5 * 7^2 * 11^4", "2", "31 * 53 * 173"),
    ("5 * 11^7", "2", "3^4 * 61^2"),
    ("3^2 * 5^6 * 7^3", "1", "2^2 * 13 * 37 * 173"),
    ("2 * 3 * 5^3 * 7^2 * 11^3", "1", "37 * 83 * 113"),
    ("3^6 * 5^3 * 7^2 * 11", "1", "2^2 * 23 * 47 * 127"),
    ("2 * 3 * 7^9", "5", "13 * 17 * 53 * 61"),
    ("3^3 * 11^6", "1", "2^3 * 5 * 17 * 23 * 47"),
    ("3^2 * 5^9 * 11", "4", "53 * 131^2"),
    ("2^3 * 3^4 * 5 * 11^4", "1", "37 * 137 * 223"),
    ("2^4 * 5^2 * 7^6", "1", "11 * 23 * 59 * 101"),
    ("3^2 * 5^3 * 7^3 * 11^2", "1", "2^7 * 107 * 137"),
    ("2^4 * 3^7 * 11^3", "1", "5^3 * 107 * 149"),
    ("2^7 * 3 * 5 * 7^4 * 11", "1", "13 * 37 * 61 * 73"),
    ("2^8 * 5^7 * 7", "3", "17^2 * 109 * 181"),
    ("2^7 * 3^7 * 7 * 11^2", "5", "17 * 19 * 113 * 157"),
    ("2 * 3 * 5^4 * 11^4", "1", "23 * 43^2 * 149"),
    ("7^3 * 11^5", "1", "2 * 3^6 * 23 * 199"),
    ("2^7 * 5 * 7^2 * 11^3", "1", "3^2 * 13 * 23 * 43 * 59"),
    ("5^7 * 11^3", "2", "3 * 13 * 37 * 47 * 101"),
    ("2^2 * 5^3 * 7^6", "1", "3^5 * 13 * 17 * 191"),
    ("2^6 * 3^5 * 7^4", "1", "5^4 * 11 * 23 * 71"),
    ("3^7 * 5^2 * 7^3 * 11", "4", "17 * 61 * 67 * 173"),
    ("5 * 11^9", "243", "2 * 41 * 43 * 47 * 73"),
    ("5 * 7 * 11^6", "1", "2^5 * 3 * 19 * 53 * 139"),
    ("2^2 * 3^8 * 7^4", "1", "11^2 * 19 * 61 * 103"),
    ("2^2 * 3 * 5^8 * 7", "1", "31 * 43 * 53 * 223"),
    ("2^6 * 5^2 * 7 * 11^4", "3", "13^2 * 37^2 * 79"),
    ("2^4 * 11^6", "1", "7^3 * 19 * 29 * 107"),
    ("3^4 * 5 * 7^5 * 11", "2", "29 * 41 * 97 * 193"),
    ("2^2 * 5^7 * 7 * 11", "1", "13 * 71 * 139 * 191"),
    ("2^2 * 5^8 * 7 * 11", "3", "29 * 67 * 73 * 179"),
    ("3^2 * 5^2 * 7 * 11^4", "1", "2^2 * 19 * 37 * 47 * 193"),
    ("2^7 * 3^6 * 5 * 7^2", "1", "37 * 43 * 107 * 151"),
    ("3^3 * 7^7", "1", "2 * 43 * 53^2 * 109"),
    ("2^2 * 5^2 * 7^5 * 11", "1", "3 * 19 * 41 * 61 * 211"),
    ("2^5 * 3^3 * 5^2 * 7 * 11^2", "1", "29 * 31 * 151 * 223"),
    ("2 * 5^6 * 7^2 * 11", "1", "29 * 61 * 79 * 227"),
    ("2^2 * 5^2 * 11^5", "1", "3^5 * 19 * 79 * 89"),
    ("3^2 * 5^4 * 11^4", "1", "2 * 7 * 97 * 139 * 179"),
    ("5^4 * 7^4 * 11^2", "3", "2^3 * 17 * 31 * 67 * 127"),
    ("2^3 * 3^2 * 5^6 * 7 * 11", "1", "13 * 29^2 * 59^2"),
    ("3^2 * 5^4 * 7^3 * 11^2", "4", "19^3 * 29 * 197"),
    ("7^4 * 11^5", "9", "2^3 * 13 * 17 * 19^2 * 79"),
    ("2 * 5^4 * 11^5", "3", "19 * 103 * 157 * 181"),
    ("3 * 5^2 * 11^6", "4", "37 * 73 * 127 * 179"),
    ("2^2 * 3^4 * 5^5 * 11^2", "1", "29 * 109 * 149 * 157"),
    ("2^2 * 5^3 * 7^2 * 11^4", "9", "13 * 29^2 * 71 * 101"),
    ("3^7 * 5^2 * 7^4", "1", "2^3 * 17 * 23 * 137 * 193"),
    ("2 * 5 * 7^3 * 11^4", "3", "23 * 29 * 37 * 53 * 73"),
    ("2^2 * 3 * 7^7 * 11", "5", "47 * 107 * 149 * 179"),
    ("3 * 11^8", "10", "7 * 29 * 67 * 71 * 163"),
    ("2 * 5^5 * 7^6", "11", "3 * 43 * 83 * 89 * 211"),
    ("3 * 5^5 * 7^2 * 11^3", "8", "23 * 41 * 47^2 * 107"),
];

/// Sign bit followed by parities on the first 15 primes.
pub const THREE_QUBIT_PARITY: [[u8; 16]; 20] = [
    [1, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
    [1, 1, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    [1, 0, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0],
    [1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1],
    [0, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0],
];

/// Reference 5-qubit selection vector, 1-based rows set to 1.
pub const FIVE_QUBIT_SELECTION: [usize; 11] = [10, 13, 14, 18, 21, 22, 26, 32, 34, 49, 50];

pub const FIVE_QUBIT_X: &str = "639232456435359657331994419097900390625";
pub const FIVE_QUBIT_Y: &str = "12136572734325633629343926054845304";
