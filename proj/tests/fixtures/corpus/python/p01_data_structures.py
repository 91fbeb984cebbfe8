config = {"debug": True, "level": 3}
names = ["a", "b", "c"]
unique = {1, 2, 3}
pair = (1, 2)
empty_dict = {}
empty_list = []
