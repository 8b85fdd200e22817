def move_one_ball(arr):
    """
    Determine if it is possible to get a sorted array
    by performing right shift operations.
    Ex: [3, 4, 5, 1, 2] -> True (2 shifts)
    Ex: [3, 5, 4, 1, 2] -> False
    """
    if len(arr) == 0: return True
    sorted_arr = sorted(arr)
    if arr == sorted_arr: return True
    
    # Check all possible rotations
    for i in range(1, len(arr)):
        if arr[i:] + arr[:i] == sorted_arr:
            return True
    return False
